#include <doctest.h>

#include <cmath>

#include "curvlab/families.hpp"
#include "curvlab/special.hpp"

using namespace curvlab;
using radial::ExampleFamily;
using radial::FamilyKind;
using radial::RadialCutoff;

TEST_CASE("cutoff plateaus, midpoint and derivative orders") {
  const RadialCutoff cut(1.0, 0.25);
  CHECK(cut(0.0, 0) == 1.0);
  CHECK(cut(1.0, 0) == 1.0);
  CHECK(cut(0.5, 1) == 0.0);
  CHECK(cut(1.125, 0) == 0.0);
  CHECK(cut(1.25, 0) == 0.0);  // r = r0 + eps
  CHECK(cut(1.0625, 0) == doctest::Approx(0.5).epsilon(1e-14));  // odd-symmetric midpoint
  const double mid = cut(1.03, 0);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  CHECK_THROWS_AS(cut(0.5, 3), validation_error);
  CHECK_THROWS_AS(cut(-0.1, 0), validation_error);
  CHECK_THROWS_AS(RadialCutoff(0.0, 0.1), validation_error);
}

TEST_CASE("family construction rules") {
  CHECK_THROWS_AS(ExampleFamily::make(FamilyKind::C10, {.n = 2, .i = 5.0}), validation_error);
  CHECK_THROWS_AS(ExampleFamily::make(FamilyKind::Integral, {.n = 2, .i = 5.0}), validation_error);
  CHECK_THROWS_AS(ExampleFamily::make(FamilyKind::C10, {.n = 3, .i = 1.0}), validation_error);
  CHECK_THROWS_AS(
      ExampleFamily::make(FamilyKind::ClosedTorus, {.n = 3, .i = 4.0, .r0 = 1.0, .torus_side = 2.0}),
      geometry_error);

  const auto c21 = ExampleFamily::make(FamilyKind::C21, {.n = 3, .i = 32.0});
  CHECK(c21.r0() == doctest::Approx(std::pow(32.0, 0.4)).epsilon(1e-14));
  const auto boundary = ExampleFamily::make(FamilyKind::Boundary, {.n = 3, .i = 4.0});
  CHECK(boundary.r0() == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-14));
  const auto twodim = ExampleFamily::make(FamilyKind::TwoDim, {.i = 1.0});
  CHECK(twodim.n() == 2);
}

TEST_CASE("family conformal factor values and derivatives") {
  const auto c10 = ExampleFamily::make(FamilyKind::C10, {.n = 3, .i = 4.0, .r0 = 1.0});
  CHECK(c10.factor(0.0, 0) == 1.0);
  CHECK(c10.factor(0.0, 1) == 0.0);
  CHECK(c10.factor(0.0, 2) == doctest::Approx(2.0).epsilon(1e-14));
  // lap u (0) = n u''(0) = 6 for the sin(i r^2)/i profile
  CHECK(geom::radial_laplacian(c10.factor_jet(0.0), 0.0, 3) == doctest::Approx(6.0));
  CHECK(c10.factor(c10.support_radius() + 0.5, 0) == 1.0);
  CHECK(c10.factor(c10.support_radius() + 0.5, 1) == 0.0);

  const auto below = ExampleFamily::make(FamilyKind::Below, {.n = 3, .i = 2.0, .alpha = 1.0});
  CHECK(below.factor(below.support_radius() + 1.0, 0) == 0.0);  // exponent vanishes outside
  CHECK(below.factor(0.0, 0) == doctest::Approx(0.5).epsilon(1e-14));

  const auto twodim = ExampleFamily::make(FamilyKind::TwoDim, {.i = 1.0});
  CHECK(twodim.factor(0.0, 0) == 0.0);
  CHECK_THROWS_AS(twodim.factor(0.1, 3), validation_error);

  // every compactly supported family is exactly trivial beyond its support,
  // so the quadrature truncation radius is exact
  for (FamilyKind kind : {FamilyKind::Integral, FamilyKind::C10, FamilyKind::ClosedTorus,
                          FamilyKind::C21, FamilyKind::Below}) {
    const auto fam = ExampleFamily::make(kind, {.n = 3, .i = 6.0, .r0 = 0.4, .torus_side = 4.0});
    const double trivial = fam.mode() == geom::ConformalMode::PowerLaw ? 1.0 : 0.0;
    for (double pad : {0.0, 0.1, 2.0}) {
      CHECK(fam.factor(fam.support_radius() + pad, 0) == trivial);
      CHECK(fam.factor(fam.support_radius() + pad, 1) == 0.0);
      CHECK(fam.factor(fam.support_radius() + pad, 2) == 0.0);
    }
  }
}

TEST_CASE("gradient-square integrand: plateau closed forms and annulus fallback") {
  const auto c10 = ExampleFamily::make(FamilyKind::C10, {.n = 3, .i = 6.0, .r0 = 1.0});
  CHECK(c10.grad_sq_integrand(0.0) == 0.0);
  const double r_node = std::sqrt(M_PI / (2.0 * 6.0));  // 2 i r^2 = pi
  CHECK(c10.grad_sq_integrand(r_node) == doctest::Approx(0.0).epsilon(1e-12));
  // inside the annulus the fallback must equal the squared analytic derivative
  const double r_ann = 1.06;
  const auto j = c10.factor_jet(r_ann);
  CHECK(c10.grad_sq_integrand(r_ann) == doctest::Approx(j.d1 * j.d1).epsilon(1e-14));

  const auto integral = ExampleFamily::make(FamilyKind::Integral, {.n = 3, .i = 2.0, .r0 = 1.5});
  // 4 i^{2l} r^2 e^{-2 i r^2} at r = 1, l = 5/4
  CHECK(integral.grad_sq_integrand(1.0) ==
        doctest::Approx(4.0 * std::pow(2.0, 2.5) * std::exp(-4.0)).epsilon(1e-13));
  CHECK(integral.grad_sq_integrand(1.0) ==
        doctest::Approx(std::pow(integral.factor_jet(1.0).d1, 2)).epsilon(1e-12));
}

TEST_CASE("gaussian moments: closed grounds and quadrature agreement") {
  // I_1 closed form (bitwise: the ground case IS this expression)
  CHECK(radial::gaussian_moment(0, 1.0, 1.0) == (1.0 - std::exp(-2.0)) / 4.0);

  quad::QuadratureSettings qs;
  qs.abs_tol = 1e-13;
  for (int n : {1, 2, 3, 4, 5, 6})
    for (double i : {1.0, 10.0})
      for (double r0 : {0.5, 1.0}) {
        const double rec = radial::gaussian_moment(n, i, r0);
        const auto q = quad::integrate(
            [n, i](double r) { return std::pow(r, n + 1) * std::exp(-2.0 * i * r * r); }, 0.0, r0,
            qs);
        CHECK(std::abs(rec - q.value) <= 1e-10);
      }
  CHECK_THROWS_AS(radial::gaussian_moment(-1, 1.0, 1.0), validation_error);
  CHECK_THROWS_AS(radial::gaussian_moment(1, -1.0, 1.0), validation_error);
}

TEST_CASE("I0 lower bound holds in the quarter-disc form, fails when doubled") {
  const double i = 1.0, r0 = 1.0;
  const auto i0 = quad::integrate([i](double r) { return std::exp(-2.0 * i * r * r); }, 0.0, r0, {});
  CHECK(i0.value == doctest::Approx(0.5981440066613041).epsilon(1e-10));
  CHECK(i0.value >= radial::gaussian_i0_lower_bound(i, r0));
  // the same expression with the inner term doubled overshoots the integral
  const double doubled = std::sqrt(M_PI / 2.0 * (1.0 - std::exp(-2.0 * i * r0 * r0)) / (2.0 * i));
  CHECK(i0.value < doubled);
}

TEST_CASE("oscillatory moments: closed forms match quadrature, recurrences hold") {
  const double a = -1.0, b = -0.5, d = a * a + b * b;
  const auto m = radial::oscillatory_ijkl(a, b);
  CHECK(m.I == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(m.J == doctest::Approx(-0.2).epsilon(1e-14));  // quadrature sign, see below
  CHECK(m.K == doctest::Approx(-(a * m.I + b * m.J) / d).epsilon(1e-14));
  CHECK(m.L == doctest::Approx(-(a * m.J - b * m.I) / d).epsilon(1e-14));

  const auto q = radial::oscillatory_ijkl_quadrature(a, b, {});
  CHECK(q.I == doctest::Approx(m.I).epsilon(1e-8));
  CHECK(q.J == doctest::Approx(m.J).epsilon(1e-8));
  CHECK(q.K == doctest::Approx(m.K).epsilon(1e-8));
  CHECK(q.L == doctest::Approx(m.L).epsilon(1e-8));

  const auto q2 = radial::oscillatory_ijkl_quadrature(-2.0, -1.0, {});
  const auto m2 = radial::oscillatory_ijkl(-2.0, -1.0);
  CHECK(q2.K == doctest::Approx(m2.K).epsilon(1e-8));
  CHECK(q2.L == doctest::Approx(m2.L).epsilon(1e-8));

  // b = 0: plain gaussian moment, odd sine integrand drops out
  const auto g = radial::oscillatory_ijkl(-3.0, 0.0);
  CHECK(g.I == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(g.J == 0.0);

  CHECK_THROWS_AS(radial::oscillatory_ijkl(0.0, 1.0), validation_error);
  CHECK_THROWS_AS(radial::oscillatory_ijkl_quadrature(1.0, 1.0, {}), validation_error);
}

TEST_CASE("two-dimensional family: closed form is i-independent, quadrature vanishes") {
  const double expected = 128.0 * M_PI / 25.0;
  for (double i = 1.0; i <= 100.0; i *= 1.37)
    CHECK(radial::twodim_total(i) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(radial::twodim_total(100.0) == doctest::Approx(expected).epsilon(1e-12));

  // the moment recombination reproduces the closed form from closed-form and
  // from quadrature moments alike (it is insensitive to J)
  for (double i : {1.0, 3.0}) {
    const double a = -i, b = -0.5 * i;
    CHECK(radial::twodim_total_from_moments(radial::oscillatory_ijkl(a, b), a, b) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(radial::twodim_total_from_moments(radial::oscillatory_ijkl_quadrature(a, b, {}), a, b) ==
          doctest::Approx(expected).epsilon(1e-7));
  }

  // the direct quadrature of R dvol integrates an exact divergence: it is
  // zero, not the closed-form value
  for (double i : {1.0, 3.0}) {
    const auto fam = ExampleFamily::make(FamilyKind::TwoDim, {.i = i});
    const auto total = radial::family_total(fam, {});
    CHECK(std::abs(total.value) <= 1e-10);
    CHECK(std::abs(total.value) <= total.abs_error + 1e-12);
  }
}

TEST_CASE("stated lower bounds") {
  const auto c10 = ExampleFamily::make(FamilyKind::C10, {.n = 3, .i = 2.0, .r0 = 1.0});
  CHECK(radial::family_total_lower_bound(c10) ==
        doctest::Approx(32.0 * M_PI / 5.0).epsilon(1e-13));
  const auto c21 = ExampleFamily::make(FamilyKind::C21, {.n = 4, .i = 2.0});
  CHECK(radial::family_total_lower_bound(c21) ==
        doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-13));
  const auto integral = ExampleFamily::make(FamilyKind::Integral, {.n = 3, .i = 2.0, .r0 = 1.0});
  CHECK(radial::family_total_lower_bound(integral) ==
        doctest::Approx(24.0 * std::pow(M_PI, 1.5)).epsilon(1e-13));
  const auto below = ExampleFamily::make(FamilyKind::Below, {.n = 3, .i = 2.0});
  CHECK_THROWS_AS(radial::family_total_lower_bound(below), validation_error);
}

TEST_CASE("integral family: stated large-i bound overshoots the computed total") {
  // The computed total approaches ~47.25 for n = 3 while the stated bound is
  // 24 pi^{3/2} ~ 133.7; the discrepancy factor is 2^{(n+2)/2}.
  quad::QuadratureSettings qs;
  qs.abs_tol = 1e-9;
  qs.max_evaluations = 20000000;
  const auto fam = ExampleFamily::make(FamilyKind::Integral, {.n = 3, .i = 400.0, .r0 = 1.0});
  const double total = radial::family_total(fam, qs).value;
  const double stated = radial::family_total_lower_bound(fam);
  const double corrected = stated / std::pow(2.0, 2.5);
  CHECK(total < stated);
  CHECK(total >= corrected * 0.98);
  // limit value 16 (n-1)/(n-2) Vol(S^2) Gamma(5/2) / 2^{7/2}
  const double limit = 16.0 * 2.0 * special::sphere_area(3) *
                       special::gamma_lanczos(2.5) / std::pow(2.0, 3.5);
  CHECK(total == doctest::Approx(limit).epsilon(0.02));
}

TEST_CASE("threshold scans") {
  quad::QuadratureSettings qs;
  qs.abs_tol = 1e-8;
  qs.max_evaluations = 20000000;

  const auto c10 = ExampleFamily::make(FamilyKind::C10, {.n = 3, .i = 2.0, .r0 = 1.0});
  const auto scan = radial::find_threshold_i0(c10, 32.0 * M_PI / 5.0, 128.0, 2.0, 2.0, qs);
  CHECK(scan.i0 == 2.0);  // the bound already holds at the first tested index
  for (double t : scan.totals) CHECK(t >= 32.0 * M_PI / 5.0);

  // an impossible bound exhausts the sweep
  CHECK_THROWS_AS(radial::find_threshold_i0(c10, 1e6, 64.0, 2.0, 2.0, qs), threshold_not_found);

  // two-dimensional family against a slightly negative floor: every tested
  // index passes (the quadrature total is zero to roundoff)
  const auto twodim = ExampleFamily::make(FamilyKind::TwoDim, {.i = 1.0});
  const auto scan2 = radial::find_threshold_i0(twodim, -1e-6, 8.0, 1.0, 2.0, qs);
  CHECK(scan2.i0 == 1.0);
}

TEST_CASE("boundary family: flux vanishes only for odd i") {
  const int n = 3;
  const double r0 = std::sqrt(M_PI / 2.0);
  const double area = special::sphere_area(n) * r0 * r0;
  CHECK(radial::boundary_term(n, 3.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(radial::boundary_term(n, 5.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(radial::boundary_term(n, 2.0) == doctest::Approx(-2.0 * r0 * area).epsilon(1e-12));
  CHECK(radial::boundary_term(n, 4.0) == doctest::Approx(2.0 * r0 * area).epsilon(1e-12));

  // audits are internally consistent; the total goes negative for i = 0 mod 4
  bool saw_negative = false;
  for (int i = 2; i <= 6; ++i) {
    const auto audit = radial::boundary_example_audit(n, i);
    CHECK(audit.total_identity ==
          doctest::Approx(audit.total_quadrature)
              .epsilon(1e-8));
    if (i % 2 == 1) CHECK(audit.flux_vanishes);
    saw_negative = saw_negative || audit.total_quadrature < 0.0;
  }
  CHECK(saw_negative);

  // consequence: an all-integer geometric sweep never stays above half the
  // interior value, because multiples of four dip negative
  const auto fam = ExampleFamily::make(FamilyKind::Boundary, {.n = 3, .i = 2.0});
  CHECK_THROWS_AS(radial::find_threshold_i0(fam, 60.0, 512.0, 2.0, 2.0, {}), threshold_not_found);

  // whereas the odd-index subsequence clears it immediately
  for (double i : {3.0, 5.0, 9.0, 33.0})
    CHECK(radial::family_total(fam.with_i(i), {}).value >= 60.0);
}

TEST_CASE("torus grid total matches the radial oracle") {
  // the grid must resolve both the i r^2 oscillation and the cutoff annulus
  const double i = 50.0, r0 = 0.5, side = 2.0, eps = 0.25;
  const auto fam = ExampleFamily::make(
      FamilyKind::ClosedTorus, {.n = 3, .i = i, .r0 = r0, .eps = eps, .torus_side = side});
  const double oracle = radial::family_total(fam, {}).value;
  const double grid128 = radial::torus_example_total(3, i, r0, 128, side, eps);
  CHECK(std::abs(grid128 - oracle) / oracle <= 0.05);

  CHECK_THROWS_AS(radial::torus_example_total(3, 50.0, 1.0, 32, 2.0), geometry_error);
  CHECK_THROWS_AS(radial::torus_example_total(3, 50.0, 0.5, 8, 2.0), validation_error);
}

TEST_CASE("torus total tends to a positive constant while the factor flattens") {
  const double r0 = 0.5, side = 2.0;
  double prev_c0 = 1e300;
  for (double i : {8.0, 32.0, 128.0}) {
    const auto fam = ExampleFamily::make(
        FamilyKind::ClosedTorus, {.n = 3, .i = i, .r0 = r0, .torus_side = side});
    const double total = radial::family_total(fam, {}).value;
    CHECK(total > 0.1);
    double c0 = 0.0;
    for (double r = 0.0; r < fam.support_radius(); r += 1e-3)
      c0 = std::max(c0, std::abs(fam.factor(r, 0) - 1.0));
    CHECK(c0 < prev_c0);
    prev_c0 = c0;
  }
}
