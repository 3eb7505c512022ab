#include "curvlab/flows.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "curvlab/threads.hpp"

namespace curvlab::flows {

namespace {

constexpr double kCflFactor = 0.1;

std::vector<double> axpy(const std::vector<double>& y, double a, const std::vector<double>& x) {
  std::vector<double> out(y.size());
  for (size_t k = 0; k < y.size(); ++k) out[k] = y[k] + a * x[k];
  return out;
}

// Classic RK4 over a flat state vector.
std::vector<double> rk4(const std::vector<double>& y, double dt,
                        const std::function<std::vector<double>(const std::vector<double>&)>& rhs) {
  const auto k1 = rhs(y);
  const auto k2 = rhs(axpy(y, 0.5 * dt, k1));
  const auto k3 = rhs(axpy(y, 0.5 * dt, k2));
  const auto k4 = rhs(axpy(y, dt, k3));
  std::vector<double> out(y.size());
  for (size_t k = 0; k < y.size(); ++k)
    out[k] = y[k] + dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
  return out;
}

struct Derivatives {
  // dg[axis][comp] flattened: axis * ncomp + comp, each a field over points
  std::vector<std::vector<double>> d;
};

Derivatives metric_derivatives(const GridSym& g) {
  const int n = g.grid.n, nc = g.ncomp();
  Derivatives out;
  out.d.resize(n * nc);
  for (int axis = 0; axis < n; ++axis)
    for (int c = 0; c < nc; ++c) d1_axis(g.grid, g.v, nc, c, axis, out.d[axis * nc + c]);
  return out;
}

}  // namespace

CurvatureFields curvature_from_grid(const GridSym& g) {
  g.grid.validate();
  check_positive(g);
  const PeriodicGrid& grid = g.grid;
  const int n = grid.n, nc = g.ncomp();
  const long npts = grid.points();

  const Derivatives dg = metric_derivatives(g);

  // Christoffel symbols Gamma^k_{ij} (symmetric in ij) and the contraction
  // C_j = Gamma^k_{kj} = 1/2 g^{kl} d_j g_{kl}.
  std::vector<double> gamma(npts * n * nc);
  std::vector<double> contr(npts * n);
  parallel_for(npts, [&](long p) {
    double inv[6];
    sym_inverse(&g.v[p * nc], n, inv);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            const double dgi = dg.d[i * nc + sym_index(n, j, l)][p];
            const double dgj = dg.d[j * nc + sym_index(n, i, l)][p];
            const double dgl = dg.d[l * nc + sym_index(n, i, j)][p];
            s += inv[sym_index(n, k, l)] * (dgi + dgj - dgl);
          }
          gamma[(p * n + k) * nc + sym_index(n, i, j)] = 0.5 * s;
        }
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += gamma[(p * n + k) * nc + sym_index(n, k, j)];
      contr[p * n + j] = s;
    }
  });

  // div Gamma_{ij} = sum_k d_k Gamma^k_{ij}
  std::vector<double> div_gamma(npts * nc, 0.0);
  {
    std::vector<double> tmp;
    for (int k = 0; k < n; ++k)
      for (int c = 0; c < nc; ++c) {
        d1_axis(grid, gamma, n * nc, k * nc + c, k, tmp);
        for (long p = 0; p < npts; ++p) div_gamma[p * nc + c] += tmp[p];
      }
  }

  // d_i C_j for all pairs
  std::vector<std::vector<double>> d_contr(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d1_axis(grid, contr, n, j, i, d_contr[i * n + j]);

  CurvatureFields out{GridSym(grid), GridScalar(grid)};
  parallel_for(npts, [&](long p) {
    double inv[6];
    sym_inverse(&g.v[p * nc], n, inv);
    const double* gam = &gamma[p * n * nc];
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double r = div_gamma[p * nc + sym_index(n, i, j)] -
                   0.5 * (d_contr[i * n + j][p] + d_contr[j * n + i][p]);
        for (int l = 0; l < n; ++l)
          r += contr[p * n + l] * gam[l * nc + sym_index(n, i, j)];
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            r -= gam[k * nc + sym_index(n, i, l)] * gam[l * nc + sym_index(n, k, j)];
        out.ricci.at(p, sym_index(n, i, j)) = r;
      }
    double scal = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        scal += inv[sym_index(n, i, j)] * out.ricci.at(p, sym_index(n, i, j));
    out.scalar.at(p) = scal;
  });
  return out;
}

GridVec bianchi_vector(const GridSym& g, const GridSym& background) {
  if (!g.grid.compatible(background.grid))
    throw validation_error("bianchi_vector: incompatible grids");
  check_positive(g);
  const PeriodicGrid& grid = g.grid;
  const int n = grid.n, nc = g.ncomp();
  const long npts = grid.points();

  // h = g - gbar; with a flat background in Cartesian coordinates d gbar = 0,
  // so d h = d g.
  const Derivatives dg = metric_derivatives(g);

  GridVec x(grid);
  parallel_for(npts, [&](long p) {
    double inv[6];
    sym_inverse(&g.v[p * nc], n, inv);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        for (int pp = 0; pp < n; ++pp)
          for (int q = 0; q < n; ++q) {
            const double term = -dg.d[pp * nc + sym_index(n, q, j)][p] +
                                0.5 * dg.d[j * nc + sym_index(n, pp, q)][p];
            s += inv[sym_index(n, i, j)] * inv[sym_index(n, pp, q)] * term;
          }
      x.at(p, i) = s;
    }
  });
  return x;
}

GridSym lie_derivative(const GridVec& x, const GridSym& g) {
  const PeriodicGrid& grid = g.grid;
  const int n = grid.n, nc = g.ncomp();
  const long npts = grid.points();

  const Derivatives dg = metric_derivatives(g);
  std::vector<std::vector<double>> dx(n * n);  // dx[a][c] = d_a X^c
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) d1_axis(grid, x.v, n, c, a, dx[a * n + c]);

  GridSym out(grid);
  parallel_for(npts, [&](long p) {
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) {
          s += x.at(p, c) * dg.d[c * nc + sym_index(n, a, b)][p];
          s += g.at(p, c, b) * dx[a * n + c][p];
          s += g.at(p, a, c) * dx[b * n + c][p];
        }
        out.at(p, sym_index(n, a, b)) = s;
      }
  });
  return out;
}

FlowState make_flow_state(const GridSym& g, std::optional<GridScalar> f) {
  FlowState s;
  s.g = g;
  s.f = std::move(f);
  s.background = GridSym(g.grid);
  for (long p = 0; p < g.grid.points(); ++p)
    for (int i = 0; i < g.grid.n; ++i) s.background.at(p, sym_index(g.grid.n, i, i)) = 1.0;
  return s;
}

double cfl_dt(const GridSym& g, double cfl_factor) {
  const int n = g.grid.n, nc = g.ncomp();
  double max_inv_eig = 1.0;
  for (long p = 0; p < g.grid.points(); ++p) {
    const double lam_min = sym_min_eigenvalue(&g.v[p * nc], n);
    if (!(lam_min > 0.0)) throw state_error("cfl_dt: metric not positive definite");
    max_inv_eig = std::max(max_inv_eig, 1.0 / lam_min);
  }
  return cfl_factor * g.grid.h() * g.grid.h() / max_inv_eig;
}

void check_cfl(const GridSym& g, double dt) {
  const double limit = cfl_dt(g, kCflFactor);
  if (dt > limit * (1.0 + 1e-12))
    throw config_error("flow step: dt exceeds the CFL limit " + std::to_string(limit));
}

void check_positive(const GridSym& g) {
  const int n = g.grid.n, nc = g.ncomp();
  for (long p = 0; p < g.grid.points(); ++p)
    if (!sym_positive_definite(&g.v[p * nc], n))
      throw state_error("metric lost positive definiteness");
}

namespace {

std::vector<double> rde_rhs(const PeriodicGrid& grid, const std::vector<double>& gv,
                            const GridSym& background, bool with_deturck) {
  GridSym g;
  g.grid = grid;
  g.v = gv;
  check_positive(g);
  const CurvatureFields cur = curvature_from_grid(g);
  std::vector<double> out(gv.size());
  for (size_t k = 0; k < out.size(); ++k) out[k] = -2.0 * cur.ricci.v[k];
  if (with_deturck) {
    const GridVec x = bianchi_vector(g, background);
    const GridSym lie = lie_derivative(x, g);
    for (size_t k = 0; k < out.size(); ++k) out[k] -= lie.v[k];
  }
  return out;
}

FlowState tensor_step(const FlowState& s, double dt, bool with_deturck) {
  check_cfl(s.g, dt);
  FlowState out = s;
  out.g.v = rk4(s.g.v, dt, [&](const std::vector<double>& y) {
    return rde_rhs(s.g.grid, y, s.background, with_deturck);
  });
  out.t = s.t + dt;
  check_positive(out.g);
  return out;
}

}  // namespace

FlowState rde_step(const FlowState& s, double dt) { return tensor_step(s, dt, true); }

FlowState ricci_flow_step(const FlowState& s, double dt) { return tensor_step(s, dt, false); }

GridScalar laplace_beltrami(const GridScalar& f, const GridSym& g) {
  if (!f.grid.compatible(g.grid)) throw validation_error("laplace_beltrami: incompatible grids");
  const PeriodicGrid& grid = g.grid;
  const int n = grid.n, nc = sym_size(n);
  const long npts = grid.points();

  std::vector<std::vector<double>> df(n);
  for (int a = 0; a < n; ++a) d1_axis(grid, f.v, 1, 0, a, df[a]);

  // flux w^a = sqrt(det g) g^{ab} d_b f
  std::vector<double> flux(npts * n);
  std::vector<double> sqrt_det(npts);
  parallel_for(npts, [&](long p) {
    double inv[6];
    sym_inverse(&g.v[p * nc], n, inv);
    sqrt_det[p] = std::sqrt(sym_det(&g.v[p * nc], n));
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int b = 0; b < n; ++b) s += inv[sym_index(n, a, b)] * df[b][p];
      flux[p * n + a] = sqrt_det[p] * s;
    }
  });

  GridScalar out(grid);
  std::vector<double> tmp;
  for (int a = 0; a < n; ++a) {
    d1_axis(grid, flux, n, a, a, tmp);
    for (long p = 0; p < npts; ++p) out.v[p] += tmp[p];
  }
  for (long p = 0; p < npts; ++p) out.v[p] /= sqrt_det[p];
  return out;
}

GridScalar heat_flow_step(const GridScalar& f, const GridSym& g, double dt) {
  check_cfl(g, dt);
  GridScalar out = f;
  out.v = rk4(f.v, dt, [&](const std::vector<double>& y) {
    GridScalar ff;
    ff.grid = f.grid;
    ff.v = y;
    return laplace_beltrami(ff, g).v;
  });
  return out;
}

FlowState coupled_ricci_heat_step(const FlowState& s, double dt) {
  if (!s.f) throw validation_error("coupled_ricci_heat_step: state has no weight function");
  check_cfl(s.g, dt);
  const size_t gn = s.g.v.size();
  std::vector<double> y(gn + s.f->v.size());
  std::copy(s.g.v.begin(), s.g.v.end(), y.begin());
  std::copy(s.f->v.begin(), s.f->v.end(), y.begin() + gn);

  auto rhs = [&](const std::vector<double>& state) {
    GridSym g;
    g.grid = s.g.grid;
    g.v.assign(state.begin(), state.begin() + gn);
    GridScalar f;
    f.grid = s.f->grid;
    f.v.assign(state.begin() + gn, state.end());
    const CurvatureFields cur = curvature_from_grid(g);
    const GridScalar lap = laplace_beltrami(f, g);
    std::vector<double> out(state.size());
    for (size_t k = 0; k < gn; ++k) out[k] = -2.0 * cur.ricci.v[k];
    for (size_t k = 0; k < lap.v.size(); ++k) out[gn + k] = lap.v[k];
    return out;
  };

  const std::vector<double> next = rk4(y, dt, rhs);
  FlowState out = s;
  out.t = s.t + dt;
  out.g.v.assign(next.begin(), next.begin() + gn);
  out.f->v.assign(next.begin() + gn, next.end());
  check_positive(out.g);
  return out;
}

GridScalar conformal_ricci_flow_2d_step(const GridScalar& u, double dt) {
  if (u.grid.n != 2) throw validation_error("conformal_ricci_flow_2d_step: n must be 2");
  // CFL against the conformal diffusivity e^{-u}
  double max_diff = 0.0;
  for (double v : u.v) max_diff = std::max(max_diff, std::exp(-v));
  const double limit = kCflFactor * u.grid.h() * u.grid.h() / std::max(1.0, max_diff);
  if (dt > limit * (1.0 + 1e-12))
    throw config_error("conformal_ricci_flow_2d_step: dt exceeds the CFL limit " +
                       std::to_string(limit));

  auto rhs = [&](const std::vector<double>& y) {
    std::vector<double> lap(y.size(), 0.0), tmp;
    for (int a = 0; a < 2; ++a) {
      d2_axis(u.grid, y, 1, 0, a, tmp);
      for (size_t p = 0; p < y.size(); ++p) lap[p] += tmp[p];
    }
    std::vector<double> out(y.size());
    for (size_t p = 0; p < y.size(); ++p) out[p] = std::exp(-y[p]) * lap[p];
    return out;
  };
  GridScalar out = u;
  out.v = rk4(u.v, dt, rhs);
  return out;
}

GridSym conformal_metric_from_scalar(const GridScalar& u, bool exponential) {
  const int n = u.grid.n;
  GridSym g(u.grid);
  for (long p = 0; p < u.grid.points(); ++p) {
    double factor;
    if (exponential)
      factor = std::exp(u.v[p]);
    else {
      if (!(u.v[p] > 0.0))
        throw validation_error("conformal_metric_from_scalar: u must be positive");
      factor = std::pow(u.v[p], 4.0 / (n - 2));
    }
    for (int i = 0; i < n; ++i) g.at(p, sym_index(n, i, i)) = factor;
  }
  return g;
}

double total_scalar(const GridSym& g) {
  FlowState s = make_flow_state(g);
  return weighted_total(s);
}

double weighted_total(const FlowState& s) {
  const CurvatureFields cur = curvature_from_grid(s.g);
  const int n = s.g.grid.n, nc = sym_size(n);
  const long npts = s.g.grid.points();
  const double cell = std::pow(s.g.grid.h(), n);
  double total = 0.0;
  for (long p = 0; p < npts; ++p) {
    const double w = s.f ? std::exp(-s.f->v[p]) : 1.0;
    total += cur.scalar.at(p) * w * std::sqrt(sym_det(&s.g.v[p * nc], n));
  }
  return total * cell;
}

namespace {

struct PointInvariants {
  double ric_sq;   // |Ric|^2_g
  double r;        // scalar curvature
  double sqrt_det;
};

std::vector<PointInvariants> invariants(const GridSym& g, const CurvatureFields& cur) {
  const int n = g.grid.n, nc = sym_size(n);
  const long npts = g.grid.points();
  std::vector<PointInvariants> out(npts);
  parallel_for(npts, [&](long p) {
    double inv[6];
    sym_inverse(&g.v[p * nc], n, inv);
    double rs = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            rs += inv[sym_index(n, i, k)] * inv[sym_index(n, j, l)] *
                  cur.ricci.at(p, sym_index(n, i, j)) * cur.ricci.at(p, sym_index(n, k, l));
    out[p] = {rs, cur.scalar.at(p), std::sqrt(sym_det(&g.v[p * nc], n))};
  });
  return out;
}

}  // namespace

double evolution_identity_rhs(const FlowState& s) {
  if (!s.f) throw validation_error("evolution_identity_rhs: state has no weight function");
  const CurvatureFields cur = curvature_from_grid(s.g);
  const auto inv = invariants(s.g, cur);
  const GridScalar lap_f = laplace_beltrami(*s.f, s.g);

  const PeriodicGrid& grid = s.g.grid;
  const int n = grid.n, nc = sym_size(n);
  std::vector<std::vector<double>> df(n);
  for (int a = 0; a < n; ++a) d1_axis(grid, s.f->v, 1, 0, a, df[a]);

  const double cell = std::pow(grid.h(), n);
  double rhs = 0.0;
  for (long p = 0; p < grid.points(); ++p) {
    double ginv[6];
    sym_inverse(&s.g.v[p * nc], n, ginv);
    double grad_f_sq = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) grad_f_sq += ginv[sym_index(n, a, b)] * df[a][p] * df[b][p];
    const double w = std::exp(-s.f->v[p]) * inv[p].sqrt_det;
    rhs += (2.0 * inv[p].ric_sq - inv[p].r * inv[p].r) * w;
    rhs -= (2.0 * lap_f.v[p] - grad_f_sq) * inv[p].r * w;
  }
  return rhs * cell;
}

double evolution_identity_residual(const FlowState& s, double window) {
  if (!s.f) throw validation_error("evolution_identity_residual: state has no weight function");
  if (!(window > 0.0)) throw validation_error("evolution_identity_residual: window must be > 0");

  auto advance = [&](FlowState state, double span) {
    const double dt_max = cfl_dt(state.g, kCflFactor);
    const int steps = std::max(1, static_cast<int>(std::ceil(span / dt_max)));
    const double dt = span / steps;
    for (int k = 0; k < steps; ++k) state = coupled_ricci_heat_step(state, dt);
    return state;
  };

  const double w0 = weighted_total(s);
  const FlowState mid = advance(s, window);
  const FlowState end = advance(mid, window);
  const double w2 = weighted_total(end);
  const double derivative = (w2 - w0) / (2.0 * window);
  const double rhs = evolution_identity_rhs(mid);
  return std::abs(derivative - rhs) / (std::abs(rhs) + 1.0);
}

double cauchy_schwarz_check(const GridSym& g) { return cauchy_schwarz_audit(g).min_value; }

CauchySchwarzAudit cauchy_schwarz_audit(const GridSym& g) {
  const CurvatureFields cur = curvature_from_grid(g);
  const auto inv = invariants(g, cur);
  CauchySchwarzAudit audit;
  audit.min_value = std::numeric_limits<double>::infinity();
  for (const auto& p : inv) {
    audit.min_value = std::min(audit.min_value, g.grid.n * p.ric_sq - p.r * p.r);
    audit.max_ric_sq = std::max(audit.max_ric_sq, p.ric_sq);
  }
  return audit;
}

GridSym perturbed_flat_metric(const PeriodicGrid& grid, double amplitude, int k) {
  grid.validate();
  const int n = grid.n;
  const double w = 2.0 * M_PI * k / grid.side;
  GridSym g(grid);
  for (long p = 0; p < grid.points(); ++p) {
    const auto c = grid.coords(p);
    const double x = c[0] * grid.h(), y = c[1] * grid.h();
    const double z = (n == 3) ? c[2] * grid.h() : 0.0;
    g.at(p, sym_index(n, 0, 0)) = 1.0 + amplitude * std::sin(w * x) * std::cos(w * y);
    g.at(p, sym_index(n, 1, 1)) = 1.0 + amplitude * std::cos(w * x) * std::sin(w * y);
    g.at(p, sym_index(n, 0, 1)) = 0.5 * amplitude * std::sin(w * x) * std::sin(w * y);
    if (n == 3) {
      g.at(p, sym_index(n, 2, 2)) = 1.0 + amplitude * std::sin(w * y) * std::cos(w * z);
      g.at(p, sym_index(n, 0, 2)) = 0.4 * amplitude * std::sin(w * x) * std::sin(w * z);
      g.at(p, sym_index(n, 1, 2)) = 0.3 * amplitude * std::cos(w * y) * std::sin(w * z);
    }
  }
  check_positive(g);
  return g;
}

GridScalar cosine_field(const PeriodicGrid& grid, double amplitude, int axis, int k) {
  if (axis < 0 || axis >= grid.n) throw validation_error("cosine_field: bad axis");
  GridScalar f(grid);
  const double w = 2.0 * M_PI * k / grid.side;
  for (long p = 0; p < grid.points(); ++p) {
    const auto c = grid.coords(p);
    f.v[p] = amplitude * std::cos(w * c[axis] * grid.h());
  }
  return f;
}

double soliton_total_scaling(double total0, double lambda, double t, int n) {
  if (n < 2) throw validation_error("soliton_total_scaling: n must be >= 2");
  const double factor = 1.0 - 2.0 * lambda * t;
  if (!(factor > 0.0))
    throw validation_error("soliton_total_scaling: extinction time reached");
  return total0 * std::pow(factor, 0.5 * n - 1.0);
}

DiffeoTrack identity_track(const PeriodicGrid& grid) {
  DiffeoTrack track;
  track.grid = grid;
  track.pos.resize(grid.points() * grid.n);
  for (long p = 0; p < grid.points(); ++p) {
    const auto c = grid.coords(p);
    for (int a = 0; a < grid.n; ++a) track.pos[p * grid.n + a] = c[a] * grid.h();
  }
  return track;
}

double interpolate(const PeriodicGrid& grid, const std::vector<double>& fld, int stride, int comp,
                   const double* point) {
  const int n = grid.n;
  int base[3] = {0, 0, 0};
  double w[3][4];
  for (int a = 0; a < n; ++a) {
    double s = point[a] / grid.h();
    s -= std::floor(s / grid.res) * grid.res;  // into [0, res)
    base[a] = static_cast<int>(std::floor(s));
    const double t = s - base[a];
    w[a][0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[a][1] = (t * t - 1.0) * (t - 2.0) / 2.0;
    w[a][2] = -t * (t + 1.0) * (t - 2.0) / 2.0;
    w[a][3] = t * (t * t - 1.0) / 6.0;
  }
  double sum = 0.0;
  const int kmax = (n == 3) ? 4 : 1;
  for (int kz = 0; kz < kmax; ++kz)
    for (int ky = 0; ky < 4; ++ky)
      for (int kx = 0; kx < 4; ++kx) {
        const int x = grid.wrap(base[0] - 1 + kx);
        const int y = grid.wrap(base[1] - 1 + ky);
        const int z = (n == 3) ? grid.wrap(base[2] - 1 + kz) : 0;
        double weight = w[0][kx] * w[1][ky];
        if (n == 3) weight *= w[2][kz];
        sum += weight * fld[grid.index(x, y, z) * stride + comp];
      }
  return sum;
}

namespace {

std::vector<double> advect_rhs(const DiffeoTrack& track, const GridVec& x,
                               const std::vector<double>& pos) {
  const int n = track.grid.n;
  std::vector<double> out(pos.size());
  for (long p = 0; p < track.grid.points(); ++p)
    for (int a = 0; a < n; ++a)
      out[p * n + a] = interpolate(track.grid, x.v, n, a, &pos[p * n]);
  return out;
}

void wrap_positions(const PeriodicGrid& grid, std::vector<double>& pos) {
  for (double& v : pos) v -= std::floor(v / grid.side) * grid.side;
}

}  // namespace

DiffeoTrack deturck_diffeo_step(const DiffeoTrack& track, const FlowState& s, double dt) {
  const GridVec x = bianchi_vector(s.g, s.background);
  DiffeoTrack out = track;
  out.pos = rk4(track.pos, dt,
                [&](const std::vector<double>& pos) { return advect_rhs(track, x, pos); });
  wrap_positions(track.grid, out.pos);
  return out;
}

void advance_rde_with_track(FlowState& s, DiffeoTrack& track, double dt) {
  check_cfl(s.g, dt);
  const size_t gn = s.g.v.size();
  std::vector<double> y(gn + track.pos.size());
  std::copy(s.g.v.begin(), s.g.v.end(), y.begin());
  std::copy(track.pos.begin(), track.pos.end(), y.begin() + gn);

  auto rhs = [&](const std::vector<double>& state) {
    GridSym g;
    g.grid = s.g.grid;
    g.v.assign(state.begin(), state.begin() + gn);
    const std::vector<double> pos(state.begin() + gn, state.end());
    std::vector<double> out(state.size());
    const auto dg = rde_rhs(s.g.grid, g.v, s.background, true);
    std::copy(dg.begin(), dg.end(), out.begin());
    const GridVec x = bianchi_vector(g, s.background);
    const auto dp = advect_rhs(track, x, pos);
    std::copy(dp.begin(), dp.end(), out.begin() + gn);
    return out;
  };

  const std::vector<double> next = rk4(y, dt, rhs);
  s.g.v.assign(next.begin(), next.begin() + gn);
  s.t += dt;
  check_positive(s.g);
  track.pos.assign(next.begin() + gn, next.end());
  wrap_positions(track.grid, track.pos);
}

GridSym pullback_metric(const DiffeoTrack& track, const GridSym& g) {
  if (!track.grid.compatible(g.grid)) throw validation_error("pullback_metric: incompatible grids");
  const PeriodicGrid& grid = track.grid;
  const int n = grid.n, nc = sym_size(n);
  const long npts = grid.points();

  // displacement field d(p) = Phi(p) - p, wrapped to the nearest image
  std::vector<double> disp(npts * n);
  for (long p = 0; p < npts; ++p) {
    const auto c = grid.coords(p);
    for (int a = 0; a < n; ++a) {
      double d = track.pos[p * n + a] - c[a] * grid.h();
      d -= std::round(d / grid.side) * grid.side;
      disp[p * n + a] = d;
    }
  }
  std::vector<std::vector<double>> ddisp(n * n);  // ddisp[a][c] = d_a disp^c
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) d1_axis(grid, disp, n, c, a, ddisp[a * n + c]);

  GridSym out(grid);
  parallel_for(npts, [&](long p) {
    double jac[9] = {0};  // J^c_a = d Phi^c / d x^a
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a) jac[c * n + a] = (c == a ? 1.0 : 0.0) + ddisp[a * n + c][p];
    double det;
    if (n == 2)
      det = jac[0] * jac[3] - jac[1] * jac[2];
    else
      det = jac[0] * (jac[4] * jac[8] - jac[5] * jac[7]) -
            jac[1] * (jac[3] * jac[8] - jac[5] * jac[6]) +
            jac[2] * (jac[3] * jac[7] - jac[4] * jac[6]);
    if (!(det > 0.0)) throw state_error("pullback_metric: Jacobian determinant not positive");

    double gphi[6] = {0};
    for (int c = 0; c < nc; ++c)
      gphi[c] = interpolate(grid, g.v, nc, c, &track.pos[p * n]);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        double s = 0.0;
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            s += jac[c * n + a] * jac[d * n + b] * gphi[sym_index(n, c, d)];
        out.at(p, sym_index(n, a, b)) = s;
      }
  });
  return out;
}

GridScalar compose_with_track(const DiffeoTrack& track, const GridScalar& f) {
  GridScalar out(track.grid);
  for (long p = 0; p < track.grid.points(); ++p)
    out.v[p] = interpolate(track.grid, f.v, 1, 0, &track.pos[p * track.grid.n]);
  return out;
}

}  // namespace curvlab::flows
