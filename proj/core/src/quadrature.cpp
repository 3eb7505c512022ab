#include "curvlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <vector>

namespace curvlab::quad {

void gauss_legendre(int n, double* nodes, double* weights) {
  // Newton iteration on Legendre polynomials, symmetric about 0.
  const int m = (n + 1) / 2;
  for (int k = 0; k < m; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double p1 = 0.0, dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * x * p2 - j * p3) / (j + 1);
      }
      dp = n * (x * p1 - p2) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[k] = -x;
    nodes[n - 1 - k] = x;
    weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[n - 1 - k] = weights[k];
  }
}

namespace {

struct Rule {
  std::vector<double> x, w;
};

// integrate() may run on worker threads; the node cache is shared
const Rule& cached_rule(int n) {
  static std::mutex mutex;
  static std::map<int, Rule> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    gauss_legendre(n, r.x.data(), r.w.data());
    it = cache.emplace(n, std::move(r)).first;
  }
  return it->second;
}

struct PanelEval {
  double value = 0.0;
  double absum = 0.0;  // sum of |w f|, the roundoff scale of `value`
};

struct Panel {
  double lo, hi;
  double value;
  double absum;
  double error;  // |whole - halves|
};

PanelEval gauss_panel(const std::function<double(double)>& f, double lo, double hi,
                      const Rule& rule) {
  const double c = 0.5 * (lo + hi);
  const double d = 0.5 * (hi - lo);
  PanelEval out;
  for (size_t k = 0; k < rule.x.size(); ++k) {
    const double term = rule.w[k] * f(c + d * rule.x[k]);
    out.value += term;
    out.absum += std::abs(term);
  }
  out.value *= d;
  out.absum *= d;
  return out;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureSettings& settings) {
  if (!(lo <= hi)) throw validation_error("quadrature: lo must be <= hi");
  QuadratureResult res;
  if (lo == hi) return res;

  const Rule& rule = cached_rule(settings.points_per_panel);
  long evals = 0;
  auto panel_value = [&](double a, double b) {
    evals += settings.points_per_panel;
    return gauss_panel(f, a, b, rule);
  };

  // split a raw interval into a refined panel carrying the halves estimate
  auto make_panel = [&](double a, double b) {
    const PanelEval whole = panel_value(a, b);
    const double mid = 0.5 * (a + b);
    const PanelEval l = panel_value(a, mid);
    const PanelEval r = panel_value(mid, b);
    return Panel{a, b, l.value + r.value, l.absum + r.absum,
                 std::abs(whole.value - l.value - r.value)};
  };

  struct Entry {
    Panel p;
    bool operator<(const Entry& o) const { return p.error < o.p.error; }
  };
  std::priority_queue<Entry> queue;

  const int n0 = std::max(1, settings.initial_panels);
  double total = 0.0, total_err = 0.0;
  for (int k = 0; k < n0; ++k) {
    const Panel p = make_panel(lo + (hi - lo) * k / n0, lo + (hi - lo) * (k + 1) / n0);
    queue.push(Entry{p});
    total += p.value;
    total_err += p.error;
  }

  // a panel whose halves-difference sits at the roundoff scale of its own
  // |integrand| sum cannot be improved in double precision
  constexpr double kFloorFactor = 100.0 * std::numeric_limits<double>::epsilon();

  while (total_err > settings.abs_tol && !queue.empty()) {
    const Panel p = queue.top().p;
    queue.pop();
    if (p.error <= 0.0 || p.error <= kFloorFactor * p.absum) continue;  // at the floor, keep as is
    if (evals + 6 * settings.points_per_panel > settings.max_evaluations) {
      if (settings.throw_on_budget)
        throw accuracy_error("quadrature: evaluation budget exhausted before reaching tolerance",
                             total, total_err, evals);
      res.value = total;
      res.abs_error = total_err;
      res.evaluations = evals;
      res.converged = false;
      return res;
    }
    total -= p.value;
    total_err -= p.error;
    const double mid = 0.5 * (p.lo + p.hi);
    for (const auto& [a, b] : {std::pair{p.lo, mid}, std::pair{mid, p.hi}}) {
      const Panel c = make_panel(a, b);
      queue.push(Entry{c});
      total += c.value;
      total_err += c.error;
    }
  }

  res.value = total;
  res.abs_error = total_err;
  res.evaluations = evals;
  res.converged = total_err <= settings.abs_tol;
  return res;
}

}  // namespace curvlab::quad
