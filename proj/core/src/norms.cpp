#include "curvlab/norms.hpp"

#include <algorithm>
#include <cmath>

#include "curvlab/special.hpp"
#include "curvlab/threads.hpp"

namespace curvlab::norms {

namespace {

// Jet of the conformal component c(r): h = c(r) * delta_ab in base-orthonormal
// components, c = u^{4/(n-2)} - 1 (power law) or e^{2 phi} - 1 (exponential).
geom::Jet2 component_jet(const radial::ExampleFamily& family, double r) {
  const geom::Jet2 j = family.conformal_jet(r);
  geom::Jet2 c;
  if (family.mode() == geom::ConformalMode::PowerLaw) {
    const double q = 4.0 / (family.n() - 2);
    const double uq1 = std::pow(j.value, q - 1.0);
    const double uq2 = std::pow(j.value, q - 2.0);
    c.value = std::pow(j.value, q) - 1.0;
    c.d1 = q * uq1 * j.d1;
    c.d2 = q * (q - 1.0) * uq2 * j.d1 * j.d1 + q * uq1 * j.d2;
  } else {
    const double e = std::exp(2.0 * j.value);
    c.value = e - 1.0;
    c.d1 = 2.0 * j.d1 * e;
    c.d2 = (4.0 * j.d1 * j.d1 + 2.0 * j.d2) * e;
  }
  return c;
}

struct PointNorms {
  double h = 0.0, dh = 0.0, d2h = 0.0;
};

PointNorms point_norms(const radial::ExampleFamily& family, double r) {
  const geom::Jet2 c = component_jet(family, r);
  const double rn = std::sqrt(double(family.n()));
  PointNorms p;
  p.h = rn * std::abs(c.value);
  p.dh = rn * std::abs(c.d1);
  const double tangential = (r < 1e-8) ? c.d2 : c.d1 / r;
  p.d2h = rn * std::sqrt(c.d2 * c.d2 + (family.n() - 1) * tangential * tangential);
  return p;
}

std::vector<double> sample_radii(const radial::ExampleFamily& family, long samples,
                                 bool* capped) {
  const double sup = family.support_radius();
  const long cap = 1000000;  // hard cap on the total sample count
  long ns = static_cast<long>(samples * std::max(1.0, family.i() / 10.0));

  std::vector<double> radii;
  if (family.has_cutoff()) {
    const double r0 = family.cutoff().r0();
    const double half = 0.5 * family.cutoff().eps();
    long n_plateau = static_cast<long>(ns * r0 / sup);
    long n_ann = std::max<long>(64, static_cast<long>(10.0 * ns * half / sup));
    if (n_plateau + n_ann > cap) {
      *capped = true;
      const double shrink = double(cap) / (n_plateau + n_ann);
      n_plateau = static_cast<long>(n_plateau * shrink);
      n_ann = static_cast<long>(n_ann * shrink);
    } else {
      *capped = false;
    }
    radii.reserve(n_plateau + n_ann + 2);
    for (long k = 0; k <= n_plateau; ++k) radii.push_back(r0 * k / n_plateau);
    for (long k = 1; k <= n_ann; ++k) radii.push_back(r0 + half * k / n_ann);
  } else {
    *capped = ns > cap;
    ns = std::min(ns, cap);
    radii.reserve(ns + 1);
    for (long k = 0; k <= ns; ++k) radii.push_back(sup * k / ns);
  }
  return radii;
}

double fit_rate(const std::vector<double>& i_sweep, const std::vector<double>& values) {
  // least-squares slope of log(value) against log(i); rate is its negative
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long m = 0;
  for (size_t k = 0; k < values.size(); ++k) {
    if (values[k] <= 0.0) continue;
    const double x = std::log(i_sweep[k]), y = std::log(values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return 0.0;
  return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

NormTrend classify_trend(const std::vector<double>& i_sweep, std::vector<double> values) {
  NormTrend t;
  t.values = values;
  t.floor_value = *std::min_element(values.begin(), values.end());
  const double peak = *std::max_element(values.begin(), values.end());
  if (peak <= 1e-13) {
    t.verdict = Trend::ToZero;
    t.fitted_rate = 0.0;
    return t;
  }
  t.fitted_rate = fit_rate(i_sweep, values);
  bool decreasing = true, increasing = true;
  for (size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[k - 1] * 1.02) decreasing = false;
    if (values[k] < values[k - 1] * 0.98) increasing = false;
  }
  if (decreasing && t.fitted_rate >= 0.15)
    t.verdict = Trend::ToZero;
  else if (t.fitted_rate <= 0.05 || increasing)
    t.verdict = Trend::BoundedBelow;
  else
    t.verdict = Trend::Inconclusive;
  return t;
}

const char* trend_name(Trend t) {
  switch (t) {
    case Trend::ToZero: return "to-zero";
    case Trend::BoundedBelow: return "bounded-below";
    case Trend::Inconclusive: return "inconclusive";
  }
  return "?";
}

NormReport metric_difference_norms(const radial::ExampleFamily& family,
                                   const std::vector<double>& p_list, long samples) {
  for (double p : p_list)
    if (!(p > 1.0)) throw validation_error("metric_difference_norms: p must be > 1");
  if (samples < 100) throw validation_error("metric_difference_norms: samples must be >= 100");

  NormReport report;
  const std::vector<double> radii = sample_radii(family, samples, &report.grid_capped);
  report.sample_count = static_cast<long>(radii.size());

  double sup_h = 0.0, sup_1 = 0.0, sup_2 = 0.0;
  for (double r : radii) {
    const PointNorms p = point_norms(family, r);
    sup_h = std::max(sup_h, p.h);
    sup_1 = std::max(sup_1, p.h + p.dh);
    sup_2 = std::max(sup_2, p.h + p.dh + p.d2h);
  }
  report.c0 = sup_h;
  report.c1 = sup_1;
  report.c2 = sup_2;

  const int n = family.n();
  const double area = special::sphere_area(n);
  const double sup = family.support_radius();
  quad::QuadratureSettings qs;
  qs.max_evaluations = 4000000;
  qs.initial_panels = std::max<int>(16, static_cast<int>(2.0 + family.i() * sup * sup / M_PI));
  for (double p : p_list) {
    // tolerance scaled to the integrand's own magnitude (sup-norm bound)
    const double scale = (std::pow(report.c0, p) + std::pow(report.c1, p)) * area *
                         std::pow(sup, n) / n;
    qs.abs_tol = std::max(1e-14, 1e-10 * scale);
    const auto integrand = [&family, p, n](double r) {
      const PointNorms q = point_norms(family, r);
      return (std::pow(q.h, p) + std::pow(q.dh, p)) * std::pow(r, n - 1);
    };
    const auto res = quad::integrate(integrand, 0.0, sup, qs);
    report.w1p[p] = std::pow(area * res.value, 1.0 / p);
  }
  return report;
}

Classification convergence_classification(const radial::ExampleFamily& family,
                                          const std::vector<double>& i_sweep, long samples) {
  if (i_sweep.size() < 3)
    throw validation_error("convergence_classification: need at least 3 sweep points");
  Classification cls;
  cls.i_sweep = i_sweep;
  std::vector<NormReport> reports(i_sweep.size());
  parallel_for(static_cast<long>(i_sweep.size()), [&](long k) {
    reports[k] = metric_difference_norms(family.with_i(i_sweep[k]), {}, samples);
  });
  auto collect = [&](auto member) {
    std::vector<double> v;
    for (const auto& r : reports) v.push_back(r.*member);
    return v;
  };
  cls.c0 = classify_trend(i_sweep, collect(&NormReport::c0));
  cls.c1 = classify_trend(i_sweep, collect(&NormReport::c1));
  cls.c2 = classify_trend(i_sweep, collect(&NormReport::c2));
  return cls;
}

}  // namespace curvlab::norms
