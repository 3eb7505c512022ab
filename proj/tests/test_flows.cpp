#include <doctest.h>

#include <cmath>

#include "curvlab/families.hpp"
#include "curvlab/flows.hpp"

using namespace curvlab;
using namespace curvlab::flows;

namespace {

GridSym flat_metric(const PeriodicGrid& grid) {
  GridSym g(grid);
  for (long p = 0; p < grid.points(); ++p)
    for (int i = 0; i < grid.n; ++i) g.at(p, sym_index(grid.n, i, i)) = 1.0;
  return g;
}

GridScalar mode_field(const PeriodicGrid& grid, double amp, int kx, int ky, int kz = 0) {
  GridScalar f(grid);
  const double w = 2.0 * M_PI / grid.side;
  for (long p = 0; p < grid.points(); ++p) {
    const auto c = grid.coords(p);
    double v = amp * std::sin(w * kx * c[0] * grid.h()) * std::cos(w * ky * c[1] * grid.h());
    if (grid.n == 3 && kz) v *= std::cos(w * kz * c[2] * grid.h());
    f.v[p] = v;
  }
  return f;
}

}  // namespace

TEST_CASE("grid validation and symmetric component indexing") {
  CHECK_THROWS_AS(PeriodicGrid({2, 15, 1.0}).validate(), validation_error);
  CHECK_THROWS_AS(PeriodicGrid({2, 8, 1.0}).validate(), validation_error);
  CHECK_THROWS_AS(PeriodicGrid({4, 16, 1.0}).validate(), validation_error);
  CHECK(sym_index(3, 0, 0) == 0);
  CHECK(sym_index(3, 1, 0) == 1);
  CHECK(sym_index(3, 2, 2) == 5);
  CHECK(sym_size(3) == 6);
}

TEST_CASE("symmetric linear algebra helpers") {
  const double m2[3] = {2.0, 0.5, 1.0};
  CHECK(sym_det(m2, 2) == doctest::Approx(1.75));
  double inv[3];
  sym_inverse(m2, 2, inv);
  CHECK(inv[0] * m2[0] + inv[1] * m2[1] == doctest::Approx(1.0));
  CHECK(sym_min_eigenvalue(m2, 2) ==
        doctest::Approx(0.5 * (3.0 - std::sqrt(1.0 + 4.0 * 0.25))));
  const double m3[6] = {2.0, 0.1, -0.2, 3.0, 0.3, 1.5};
  double inv3[6];
  sym_inverse(m3, 3, inv3);
  // check g * g^{-1} = id on a couple of entries
  double id00 = m3[0] * inv3[0] + m3[1] * inv3[1] + m3[2] * inv3[2];
  CHECK(id00 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(sym_positive_definite(m3, 3));
  const double bad[6] = {1.0, 0.0, 0.0, -1.0, 0.0, 1.0};
  CHECK_FALSE(sym_positive_definite(bad, 3));
}

TEST_CASE("flat metric is a fixed point with vanishing curvature") {
  for (int n : {2, 3}) {
    PeriodicGrid grid{n, 16, 1.0};
    const auto g = flat_metric(grid);
    const auto cur = curvature_from_grid(g);
    for (double v : cur.ricci.v) CHECK(std::abs(v) <= 1e-12);
    for (double v : cur.scalar.v) CHECK(std::abs(v) <= 1e-12);

    auto s = make_flow_state(g);
    const auto next = rde_step(s, 1e-5);
    for (size_t k = 0; k < g.v.size(); ++k)
      CHECK(std::abs(next.g.v[k] - g.v[k]) <= 1e-12);
  }
}

TEST_CASE("discrete Ricci tensor is exactly symmetric") {
  PeriodicGrid grid{3, 16, 1.0};
  const auto g = perturbed_flat_metric(grid, 0.05);
  const auto cur = curvature_from_grid(g);
  // symmetric storage makes this structural; verify values are sane instead
  double max_ric = 0.0;
  for (double v : cur.ricci.v) {
    CHECK(std::isfinite(v));
    max_ric = std::max(max_ric, std::abs(v));
  }
  CHECK(max_ric > 0.1);
}

TEST_CASE("grid curvature matches the conformal oracles at 4th order") {
  auto err2 = [](int res) {
    PeriodicGrid grid{2, res, 1.0};
    GridScalar u = mode_field(grid, 0.08, 1, 1);
    const double w = 2.0 * M_PI;
    const auto cur = curvature_from_grid(conformal_metric_from_scalar(u, true));
    double err = 0.0;
    for (long p = 0; p < grid.points(); ++p)
      err = std::max(err,
                     std::abs(cur.scalar.v[p] - std::exp(-u.v[p]) * 2.0 * w * w * u.v[p]));
    return err;
  };
  const double e16 = err2(16), e32 = err2(32);
  CHECK(std::log2(e16 / e32) >= 3.5);

  auto err3 = [](int res) {
    PeriodicGrid grid{3, res, 1.0};
    GridScalar u(grid);
    const double w = 2.0 * M_PI;
    for (long p = 0; p < grid.points(); ++p) {
      const auto c = grid.coords(p);
      u.v[p] = 1.0 + 0.05 * std::sin(w * c[0] * grid.h()) * std::sin(w * c[1] * grid.h()) *
                         std::sin(w * c[2] * grid.h());
    }
    const auto cur = curvature_from_grid(conformal_metric_from_scalar(u, false));
    double err = 0.0;
    for (long p = 0; p < grid.points(); ++p) {
      const double lap = -3.0 * w * w * (u.v[p] - 1.0);
      err = std::max(err, std::abs(cur.scalar.v[p] - std::pow(u.v[p], -5.0) * (-8.0 * lap)));
    }
    return err;
  };
  CHECK(std::log2(err3(16) / err3(32)) >= 3.5);
}

TEST_CASE("bianchi vector: trivial cases and the naive-summation oracle") {
  PeriodicGrid grid{2, 16, 1.0};
  const auto flat = flat_metric(grid);
  const auto zero = bianchi_vector(flat, flat);
  for (double v : zero.v) CHECK(std::abs(v) <= 1e-14);

  // h = c gbar with constant c: derivatives vanish, so X = 0
  GridSym scaled = flat;
  for (double& v : scaled.v) v *= 1.3;
  const auto zero2 = bianchi_vector(scaled, flat);
  for (double v : zero2.v) CHECK(std::abs(v) <= 1e-14);

  // independent naive evaluation at a few points
  const auto g = perturbed_flat_metric(grid, 0.07);
  const auto x = bianchi_vector(g, flat);
  const int n = 2, nc = sym_size(n);
  auto d1_point = [&](int comp, int axis, long p) {
    const auto c = grid.coords(p);
    auto fetch = [&](int shift) {
      auto q = c;
      q[axis] = grid.wrap(q[axis] + shift);
      return g.v[grid.index(q[0], q[1], q[2]) * nc + comp];
    };
    return (fetch(-2) - 8.0 * fetch(-1) + 8.0 * fetch(1) - fetch(2)) / (12.0 * grid.h());
  };
  for (long p : {0L, 37L, 100L, 255L}) {
    double inv[3];
    sym_inverse(&g.v[p * nc], n, inv);
    for (int i = 0; i < n; ++i) {
      double expect = 0.0;
      for (int j = 0; j < n; ++j)
        for (int pp = 0; pp < n; ++pp)
          for (int q = 0; q < n; ++q)
            expect += inv[sym_index(n, i, j)] * inv[sym_index(n, pp, q)] *
                      (-d1_point(sym_index(n, q, j), pp, p) +
                       0.5 * d1_point(sym_index(n, pp, q), j, p));
      CHECK(x.at(p, i) == doctest::Approx(expect).epsilon(1e-10));
    }
  }
}

TEST_CASE("rde step: SPD preserved and high-frequency content smoothed") {
  PeriodicGrid grid{2, 32, 1.0};
  auto s = make_flow_state(perturbed_flat_metric(grid, 0.05, 5));
  const double dt = 0.9 * cfl_dt(s.g);

  auto sup_grad = [&](const GridSym& g) {
    double m = 0.0;
    std::vector<double> tmp;
    for (int axis = 0; axis < 2; ++axis)
      for (int c = 0; c < g.ncomp(); ++c) {
        d1_axis(grid, g.v, g.ncomp(), c, axis, tmp);
        for (double v : tmp) m = std::max(m, std::abs(v));
      }
    return m;
  };

  double prev = sup_grad(s.g);
  for (int k = 0; k < 4; ++k) {
    s = rde_step(s, dt);
    check_positive(s.g);  // no positivity loss after stepping
    const double cur = sup_grad(s.g);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS_AS(rde_step(s, 100.0 * dt), config_error);
}

TEST_CASE("ricci flow on conformal 2-D data matches the scalar reduction") {
  PeriodicGrid grid{2, 32, 1.0};
  GridScalar u = mode_field(grid, 0.1, 1, 1);
  auto s = make_flow_state(conformal_metric_from_scalar(u, true));
  const double dt = 0.8 * cfl_dt(s.g);
  for (int k = 0; k < 10; ++k) {
    s = ricci_flow_step(s, dt);
    u = conformal_ricci_flow_2d_step(u, dt);
  }
  const auto from_scalar = conformal_metric_from_scalar(u, true);
  double err = 0.0;
  for (size_t k = 0; k < s.g.v.size(); ++k)
    err = std::max(err, std::abs(s.g.v[k] - from_scalar.v[k]));
  CHECK(err <= 2e-6);  // measured 8.6e-7 at res 32: the O(h^4) stencil gap
}

TEST_CASE("heat flow: constants, spectral decay and the maximum principle") {
  PeriodicGrid grid{2, 64, 2.0 * M_PI};
  const auto g = flat_metric(grid);

  GridScalar constant(grid);
  for (double& v : constant.v) v = 0.7;
  const auto still = heat_flow_step(constant, g, 0.5 * cfl_dt(g));
  for (double v : still.v) CHECK(v == doctest::Approx(0.7).epsilon(1e-14));

  // f0 = sin(x): decays like e^{-t} on side 2 pi
  GridScalar f(grid);
  for (long p = 0; p < grid.points(); ++p)
    f.v[p] = std::sin(grid.coords(p)[0] * grid.h());
  double t = 0.0;
  const double t_end = 0.1, dt = 0.9 * cfl_dt(g);
  while (t < t_end) {
    const double step = std::min(dt, t_end - t);
    f = heat_flow_step(f, g, step);
    t += step;
  }
  double err = 0.0;
  for (long p = 0; p < grid.points(); ++p)
    err = std::max(err,
                   std::abs(f.v[p] - std::exp(-t_end) * std::sin(grid.coords(p)[0] * grid.h())));
  CHECK(err <= 1e-6);

  // maximum principle along an evolving metric
  PeriodicGrid grid2{2, 32, 1.0};
  auto s = make_flow_state(perturbed_flat_metric(grid2, 0.05), mode_field(grid2, 0.3, 1, 2));
  double mx = 0.3, mn = -0.3;
  for (int k = 0; k < 6; ++k) {
    s = coupled_ricci_heat_step(s, 0.9 * cfl_dt(s.g));
    double cur_max = -1e300, cur_min = 1e300;
    for (double v : s.f->v) {
      cur_max = std::max(cur_max, v);
      cur_min = std::min(cur_min, v);
    }
    CHECK(cur_max <= mx + 1e-8);
    CHECK(cur_min >= mn - 1e-8);
    mx = cur_max;
    mn = cur_min;
  }
}

TEST_CASE("gauss-bonnet on the 2-torus along the conformal flow") {
  PeriodicGrid grid{2, 32, 1.0};
  GridScalar u = mode_field(grid, 0.1, 1, 1);
  double t = 0.0;
  const double dt = 2.0e-5 * (32.0 * 32.0) / (64.0 * 64.0);  // scaled CFL guess
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    if (k % 40 == 0) {
      const double total = total_scalar(conformal_metric_from_scalar(u, true));
      worst = std::max(worst, std::abs(total));
    }
    u = conformal_ricci_flow_2d_step(u, dt);
    t += dt;
  }
  CHECK(worst <= 1e-3 * grid.side * grid.side);
}

TEST_CASE("weighted total and the evolution identity residual") {
  PeriodicGrid grid{2, 32, 1.0};
  auto s = make_flow_state(perturbed_flat_metric(grid, 0.05), cosine_field(grid, 0.1, 1));
  // flat metric, f = 0: total vanishes
  auto flat = make_flow_state(flat_metric(grid));
  CHECK(std::abs(weighted_total(flat)) <= 1e-12);

  while (s.t < 0.002) s = coupled_ricci_heat_step(s, std::min(cfl_dt(s.g), 0.002 - s.t));
  const double r1 = evolution_identity_residual(s, 2e-3);
  const double r2 = evolution_identity_residual(s, 1e-3);
  CHECK(r1 <= 0.05);
  CHECK(r2 <= 0.55 * r1);
  CHECK_THROWS_AS(evolution_identity_residual(flat, 1e-3), validation_error);
}

TEST_CASE("cauchy-schwarz gap: 2-D equality, nonnegativity after evolution") {
  PeriodicGrid grid{2, 32, 1.0};
  const auto cs_flat = cauchy_schwarz_audit(flat_metric(grid));
  CHECK(std::abs(cs_flat.min_value) <= 1e-12);

  auto s = make_flow_state(perturbed_flat_metric(grid, 0.05));
  for (int k = 0; k < 3; ++k) s = rde_step(s, 0.9 * cfl_dt(s.g));
  const auto cs = cauchy_schwarz_audit(s.g);
  CHECK(cs.min_value >= -1e-8 * (1.0 + cs.max_ric_sq));
  // conformal 2-D: Ric = (R/2) g makes 2|Ric|^2 - R^2 vanish identically
  const auto conf = conformal_metric_from_scalar(mode_field(grid, 0.1, 1, 1), true);
  const auto cs2 = cauchy_schwarz_audit(conf);
  CHECK(std::abs(cs2.min_value) <= 1e-8);
}

TEST_CASE("soliton total scaling") {
  CHECK(soliton_total_scaling(3.5, 0.0, 10.0, 4) == doctest::Approx(3.5));
  CHECK(soliton_total_scaling(3.5, 2.0, 0.1, 2) == doctest::Approx(3.5));  // exponent 0
  CHECK(soliton_total_scaling(1.0, 1.0, 0.25, 4) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(soliton_total_scaling(1.0, 1.0, 0.5, 4), validation_error);
}

TEST_CASE("particle track: identity under zero field, pullback consistency") {
  PeriodicGrid grid{2, 32, 1.0};
  const auto flat = flat_metric(grid);
  auto s0 = make_flow_state(flat);
  auto track = identity_track(grid);
  const auto moved = deturck_diffeo_step(track, s0, 1e-3);
  for (size_t k = 0; k < track.pos.size(); ++k)
    CHECK(moved.pos[k] == doctest::Approx(track.pos[k]).epsilon(1e-14));
  const auto pb = pullback_metric(track, flat);
  for (size_t k = 0; k < pb.v.size(); ++k)
    CHECK(pb.v[k] == doctest::Approx(flat.v[k]).epsilon(1e-12));

  // one frozen-field step from the identity moves each particle by
  // dt X(p) + O(dt^2)
  auto sp = make_flow_state(perturbed_flat_metric(grid, 0.05));
  const auto x = bianchi_vector(sp.g, sp.background);
  const double dt_adv = 1e-4;
  const auto stepped = deturck_diffeo_step(identity_track(grid), sp, dt_adv);
  double sup_x = 0.0;
  for (double v : x.v) sup_x = std::max(sup_x, std::abs(v));
  const double adv_tol = 1e-10 + 5.0 * sup_x * dt_adv * dt_adv;
  for (long p : {11L, 200L, 777L}) {
    const auto c = grid.coords(p);
    for (int a = 0; a < 2; ++a) {
      double move = stepped.pos[p * 2 + a] - c[a] * grid.h();
      move -= std::round(move / grid.side) * grid.side;
      CHECK(std::abs(move - dt_adv * x.at(p, a)) <= adv_tol);
    }
  }

  // pulled-back RDE solution approximately satisfies the Ricci flow equation
  auto s = make_flow_state(perturbed_flat_metric(grid, 0.05));
  auto tr = identity_track(grid);
  const double dt = 0.9 * cfl_dt(s.g);
  while (s.t < 0.002) advance_rde_with_track(s, tr, dt);
  const auto ga = pullback_metric(tr, s.g);
  for (int k = 0; k < 4; ++k) advance_rde_with_track(s, tr, dt);
  const auto gb = pullback_metric(tr, s.g);
  for (int k = 0; k < 4; ++k) advance_rde_with_track(s, tr, dt);
  const auto gc = pullback_metric(tr, s.g);
  const auto cur = curvature_from_grid(gb);
  double num = 0.0, den = 0.0;
  for (size_t k = 0; k < gb.v.size(); ++k) {
    const double d = (gc.v[k] - ga.v[k]) / (8.0 * dt);
    const double r = d + 2.0 * cur.ricci.v[k];
    num += r * r;
    den += d * d;
  }
  CHECK(std::sqrt(num / den) <= 0.10);

  // diffeomorphism invariance of the weighted total
  auto f = cosine_field(grid, 0.1, 1);
  auto direct = make_flow_state(s.g, f);
  auto pulled = make_flow_state(pullback_metric(tr, s.g), compose_with_track(tr, f));
  const double a = weighted_total(direct), b = weighted_total(pulled);
  CHECK(std::abs(a - b) <= 0.02 * std::max({std::abs(a), std::abs(b), 1e-6}));
}

TEST_CASE("tensor-path total of a localized bump matches the analytic torus total") {
  const double i = 6.0, r0 = 0.5, side = 2.0, eps = 0.4;
  const auto fam = radial::ExampleFamily::make(
      radial::FamilyKind::ClosedTorus, {.n = 3, .i = i, .r0 = r0, .eps = eps, .torus_side = side});
  PeriodicGrid grid{3, 64, side};
  GridSym g(grid);
  for (long p = 0; p < grid.points(); ++p) {
    const auto c = grid.coords(p);
    auto mi = [&](int k) {
      double v = k * grid.h();
      if (v > 0.5 * side) v -= side;
      return v;
    };
    const double r =
        std::sqrt(mi(c[0]) * mi(c[0]) + mi(c[1]) * mi(c[1]) + mi(c[2]) * mi(c[2]));
    const double u4 = std::pow(fam.factor(r, 0), 4.0);
    for (int a = 0; a < 3; ++a) g.at(p, sym_index(3, a, a)) = u4;
  }
  const double tensor_total = total_scalar(g);
  const double oracle = radial::torus_example_total(3, i, r0, 192, side, eps);
  CHECK(std::abs(tensor_total - oracle) / std::abs(oracle) <= 0.02);
}

TEST_CASE("positivity loss is reported as a state error") {
  PeriodicGrid grid{2, 16, 1.0};
  GridSym g = flat_metric(grid);
  g.at(5, sym_index(2, 0, 0)) = -1.0;
  CHECK_THROWS_AS(check_positive(g), state_error);
  CHECK_THROWS_AS(curvature_from_grid(g), state_error);
}

TEST_CASE("curvature of random smooth SPD metrics stays finite and consistent") {
  unsigned long long rng = 0x853c49e6748fea9bull;
  auto next = [&rng] {
    rng ^= rng << 13;
    rng ^= rng >> 7;
    rng ^= rng << 17;
    return (rng >> 11) * (1.0 / 9007199254740992.0) - 0.5;
  };
  PeriodicGrid grid{2, 16, 1.0};
  const double w = 2.0 * M_PI;
  for (int trial = 0; trial < 5; ++trial) {
    // random low-frequency symmetric perturbation, kept safely SPD
    double a[3][4];
    for (auto& row : a)
      for (double& v : row) v = 0.12 * next();
    GridSym g(grid);
    for (long p = 0; p < grid.points(); ++p) {
      const auto c = grid.coords(p);
      const double x = c[0] * grid.h(), y = c[1] * grid.h();
      for (int comp = 0; comp < 3; ++comp) {
        const double bump = a[comp][0] * std::sin(w * x) + a[comp][1] * std::cos(w * y) +
                            a[comp][2] * std::sin(w * x) * std::sin(w * y) +
                            a[comp][3] * std::cos(w * x) * std::cos(w * y);
        g.at(p, comp) = (comp == 1) ? 0.5 * bump : 1.0 + bump;
      }
    }
    check_positive(g);
    const auto cur = curvature_from_grid(g);
    for (double v : cur.ricci.v) CHECK(std::isfinite(v));
    // scalar curvature equals the g-trace of the Ricci field pointwise
    for (long p : {3L, 77L, 191L}) {
      double inv[3];
      sym_inverse(&g.v[p * 3], 2, inv);
      const double trace = inv[0] * cur.ricci.at(p, 0) + 2.0 * inv[1] * cur.ricci.at(p, 1) +
                           inv[2] * cur.ricci.at(p, 2);
      CHECK(cur.scalar.at(p) == doctest::Approx(trace).epsilon(1e-12));
    }
    // in 2-D the Cauchy-Schwarz gap vanishes identically for any metric
    const auto cs = cauchy_schwarz_audit(g);
    CHECK(std::abs(cs.min_value) <= 1e-8 * (1.0 + cs.max_ric_sq));
  }
}
