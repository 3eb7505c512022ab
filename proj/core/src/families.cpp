#include "curvlab/families.hpp"

#include <algorithm>
#include <cmath>

#include "curvlab/special.hpp"

namespace curvlab::radial {

namespace {

double sigma(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double sigma_d1(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }
double sigma_d2(double x) { return x > 0.0 ? std::exp(-1.0 / x) * (1.0 - 2.0 * x) / (x * x * x * x) : 0.0; }

// s(x) = A/(A+B), A = sigma(x), B = sigma(1-x); exact plateaus outside (0,1).
Jet2 smoothstep_jet(double x) {
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0, 0.0};
  const double A = sigma(x), B = sigma(1.0 - x);
  const double Ad = sigma_d1(x), Bd = -sigma_d1(1.0 - x);
  const double Add = sigma_d2(x), Bdd = sigma_d2(1.0 - x);
  const double S = A + B;
  const double N = Ad * B - A * Bd;
  Jet2 j;
  j.value = A / S;
  j.d1 = N / (S * S);
  j.d2 = ((Add * B - A * Bdd) * S - 2.0 * N * (Ad + Bd)) / (S * S * S);
  return j;
}

constexpr double kTwoDimTailExponent = 38.0;  // e^{-38} ~ 3e-17 envelope cut

}  // namespace

RadialCutoff::RadialCutoff(double r0, double eps) : r0_(r0), eps_(eps) {
  if (!(r0 > 0.0)) throw validation_error("RadialCutoff: r0 must be positive");
  if (!(eps > 0.0)) throw validation_error("RadialCutoff: eps must be positive");
}

Jet2 RadialCutoff::jet(double r) const {
  if (r < 0.0) throw validation_error("RadialCutoff: r must be >= 0");
  const double half = 0.5 * eps_;
  const double x = (r0_ + half - r) / half;
  const Jet2 s = smoothstep_jet(x);
  const double dxdr = -1.0 / half;
  return {s.value, s.d1 * dxdr, s.d2 * dxdr * dxdr};
}

double RadialCutoff::operator()(double r, int deriv_order) const {
  const Jet2 j = jet(r);
  switch (deriv_order) {
    case 0: return j.value;
    case 1: return j.d1;
    case 2: return j.d2;
    default: throw validation_error("RadialCutoff: unsupported derivative order");
  }
}

const char* family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Below: return "below";
    case FamilyKind::Integral: return "integral";
    case FamilyKind::C10: return "c10";
    case FamilyKind::ClosedTorus: return "torus";
    case FamilyKind::C21: return "c21";
    case FamilyKind::TwoDim: return "twodim";
    case FamilyKind::Boundary: return "boundary";
  }
  return "?";
}

std::optional<FamilyKind> family_from_name(const std::string& name) {
  for (FamilyKind k : {FamilyKind::Below, FamilyKind::Integral, FamilyKind::C10,
                       FamilyKind::ClosedTorus, FamilyKind::C21, FamilyKind::TwoDim,
                       FamilyKind::Boundary}) {
    if (name == family_name(k)) return k;
  }
  return std::nullopt;
}

ExampleFamily ExampleFamily::make(FamilyKind kind, FamilyParams p) {
  switch (kind) {
    case FamilyKind::Below:
      if (p.n < 2) throw validation_error("below family: n must be >= 2");
      if (!(p.alpha > 0.0)) throw validation_error("below family: alpha must be positive");
      if (!(p.i >= 1.0)) throw validation_error("below family: i must be >= 1");
      p.r0 = std::sqrt(p.alpha / p.i);
      break;
    case FamilyKind::Integral:
      if (p.n < 3) throw validation_error("integral family: requires n >= 3");
      if (!(p.i >= 2.0)) throw validation_error("integral family: i must be >= 2");
      break;
    case FamilyKind::C10:
      if (p.n < 3) throw validation_error("c10 family: requires n >= 3");
      if (!(p.i >= 2.0)) throw validation_error("c10 family: i must be >= 2");
      break;
    case FamilyKind::ClosedTorus:
      if (p.n < 3) throw validation_error("torus family: requires n >= 3");
      if (!(p.i >= 2.0)) throw validation_error("torus family: i must be >= 2");
      if (!(p.torus_side > 0.0)) throw validation_error("torus family: side must be positive");
      break;
    case FamilyKind::C21:
      if (p.n < 3) throw validation_error("c21 family: requires n >= 3");
      if (!(p.i >= 2.0)) throw validation_error("c21 family: i must be >= 2");
      p.r0 = std::pow(p.i, 2.0 / (p.n + 2));
      break;
    case FamilyKind::TwoDim:
      if (!(p.i >= 1.0)) throw validation_error("twodim family: i must be >= 1");
      p.n = 2;
      break;
    case FamilyKind::Boundary:
      if (p.n < 3) throw validation_error("boundary family: requires n >= 3");
      if (!(p.i >= 2.0)) throw validation_error("boundary family: i must be >= 2");
      p.r0 = std::sqrt(M_PI / 2.0);
      break;
  }
  if (!(p.r0 > 0.0)) throw validation_error("family: r0 must be positive");
  if (p.eps <= 0.0) p.eps = p.r0 / 4.0;
  if (kind == FamilyKind::ClosedTorus && p.r0 + 0.5 * p.eps >= 0.5 * p.torus_side)
    throw geometry_error("torus family: support exceeds half the torus side");
  return ExampleFamily(kind, p);
}

ExampleFamily::ExampleFamily(FamilyKind kind, FamilyParams p) : kind_(kind), p_(p) {
  if (kind_ != FamilyKind::TwoDim && kind_ != FamilyKind::Boundary)
    cutoff_.emplace(p_.r0, p_.eps);
  if (kind_ == FamilyKind::Integral) l_ = (p_.n + 2) / 4.0;
}

FamilyParams ExampleFamily::with_i_params(double i) const {
  FamilyParams q = p_;
  q.i = i;
  if (kind_ == FamilyKind::C21 || kind_ == FamilyKind::Below) q.eps = 0.0;  // re-derive from r0
  return q;
}

ConformalMode ExampleFamily::mode() const {
  return (kind_ == FamilyKind::Below || kind_ == FamilyKind::TwoDim) ? ConformalMode::Exponential
                                                                     : ConformalMode::PowerLaw;
}

const RadialCutoff& ExampleFamily::cutoff() const {
  if (!cutoff_) throw validation_error("family has no cutoff");
  return *cutoff_;
}

double ExampleFamily::support_radius() const {
  if (cutoff_) return cutoff_->support_radius();
  if (kind_ == FamilyKind::Boundary) return p_.r0;
  return std::sqrt(kTwoDimTailExponent / p_.i);  // TwoDim envelope below 1e-16
}

Jet2 ExampleFamily::profile_jet(double r) const {
  const double i = p_.i;
  const double rr = r * r;
  switch (kind_) {
    case FamilyKind::Below:
      return {p_.alpha / i - rr, -2.0 * r, -2.0};
    case FamilyKind::Integral: {
      const double c = std::pow(i, -1.0 + l_);
      const double e = c * std::exp(-i * rr);
      return {e, -2.0 * i * r * e, (-2.0 * i + 4.0 * i * i * rr) * e};
    }
    case FamilyKind::C10:
    case FamilyKind::ClosedTorus:
    case FamilyKind::Boundary: {
      const double s = std::sin(i * rr), c = std::cos(i * rr);
      return {s / i, 2.0 * r * c, 2.0 * c - 4.0 * i * rr * s};
    }
    case FamilyKind::C21: {
      const double s = std::sin(i * rr), c = std::cos(i * rr);
      return {s / (i * i), 2.0 * r * c / i, 2.0 * c / i - 4.0 * rr * s};
    }
    case FamilyKind::TwoDim: {
      const double a = -i, b = -0.5 * i;
      const double e = std::exp(a * rr);
      const double s = std::sin(b * rr), c = std::cos(b * rr);
      Jet2 j;
      j.value = e * s;
      j.d1 = 2.0 * r * e * (a * s + b * c);
      j.d2 = 2.0 * e * (a * s + b * c) + 4.0 * rr * e * ((a * a - b * b) * s + 2.0 * a * b * c);
      return j;
    }
  }
  throw validation_error("family: unknown kind");
}

Jet2 ExampleFamily::factor_jet(double r) const {
  if (r < 0.0) throw validation_error("family: r must be >= 0");
  const double trivial = (mode() == ConformalMode::PowerLaw) ? 1.0 : 0.0;
  if (cutoff_) {
    if (r >= cutoff_->support_radius()) return {trivial, 0.0, 0.0};
    const Jet2 c = cutoff_->jet(r);
    const Jet2 p = profile_jet(r);
    return {c.value * p.value + trivial, c.d1 * p.value + c.value * p.d1,
            c.d2 * p.value + 2.0 * c.d1 * p.d1 + c.value * p.d2};
  }
  const Jet2 p = profile_jet(r);
  return {p.value + trivial, p.d1, p.d2};
}

double ExampleFamily::factor(double r, int deriv_order) const {
  const Jet2 j = factor_jet(r);
  switch (deriv_order) {
    case 0: return j.value;
    case 1: return j.d1;
    case 2: return j.d2;
    default: throw validation_error("family: unsupported derivative order");
  }
}

Jet2 ExampleFamily::conformal_jet(double r) const {
  Jet2 j = factor_jet(r);
  if (kind_ == FamilyKind::TwoDim) {  // e^u convention: phi = u/2
    j.value *= 0.5;
    j.d1 *= 0.5;
    j.d2 *= 0.5;
  }
  return j;
}

double ExampleFamily::grad_sq_integrand(double r) const {
  const double i = p_.i;
  const double rr = r * r;
  const bool plateau = cutoff_ ? (r <= cutoff_->r0()) : true;
  if (plateau) {
    switch (kind_) {
      case FamilyKind::Below:
        return 4.0 * rr;
      case FamilyKind::Integral:
        return 4.0 * std::pow(i, 2.0 * l_) * rr * std::exp(-2.0 * i * rr);
      case FamilyKind::C10:
      case FamilyKind::ClosedTorus:
      case FamilyKind::Boundary:
        return 2.0 * rr * (1.0 + std::cos(2.0 * i * rr));
      case FamilyKind::C21:
        return 2.0 * rr * (1.0 + std::cos(2.0 * i * rr)) / (i * i);
      case FamilyKind::TwoDim:
        break;  // no plateau closed form; fall through to the jet
    }
  }
  const Jet2 j = factor_jet(r);
  return j.d1 * j.d1;
}

double ExampleFamily::scalar_curvature(double r) const {
  const Jet2 j = conformal_jet(r);
  const double lap = geom::radial_laplacian(j, r, p_.n);
  if (mode() == ConformalMode::PowerLaw)
    return geom::scalar_curvature_powerlaw(j.value, lap, 0.0, p_.n);
  return geom::scalar_curvature_exponential(j.value, lap, j.d1 * j.d1, 0.0, p_.n);
}

ConformalMetricSpec ExampleFamily::metric_spec() const {
  ConformalMetricSpec spec;
  spec.n = p_.n;
  spec.mode = mode();
  spec.base_scalar_curvature = 0.0;
  if (kind_ == FamilyKind::ClosedTorus) {
    spec.base = geom::BaseKind::FlatTorus;
    spec.base_extent = p_.torus_side;
  } else {
    spec.base = geom::BaseKind::EuclideanBall;
    spec.base_extent = (kind_ == FamilyKind::Boundary) ? p_.r0 : 0.0;
  }
  spec.factor.jet = [fam = *this](double r) { return fam.conformal_jet(r); };
  if (kind_ == FamilyKind::TwoDim) {
    const double rt = support_radius();
    spec.factor.truncation_radius = rt;
    // |Delta u| <= e^{-i r^2} (6 i + 7 i^2 r^2); the tail of 2 pi int r |Delta u| dr.
    const double irt2 = p_.i * rt * rt;
    spec.factor.tail_bound = 2.0 * M_PI * std::exp(-irt2) * (3.0 + 3.5 * (irt2 + 1.0));
    spec.factor.oscillation_cycles = irt2 / M_PI;
  } else {
    spec.factor.support_radius = support_radius();
    const double sup = support_radius();
    spec.factor.oscillation_cycles = p_.i * sup * sup / M_PI;
  }
  return spec;
}

QuadratureResult family_total(const ExampleFamily& family, const QuadratureSettings& settings) {
  return geom::total_scalar_curvature(family.metric_spec(), settings);
}

QuadratureResult family_total_energy(const ExampleFamily& family,
                                     const QuadratureSettings& settings) {
  if (family.kind() == FamilyKind::TwoDim || family.kind() == FamilyKind::Boundary)
    throw validation_error("family_total_energy: requires a compactly supported u - 1");
  if (family.mode() != ConformalMode::PowerLaw)
    throw validation_error("family_total_energy: power-law families only");
  const ConformalMetricSpec spec = family.metric_spec();
  return geom::total_scalar_via_energy(spec.factor, 0.0, family.n(), settings);
}

double gaussian_moment(int n, double i, double r0) {
  if (n < 0) throw validation_error("gaussian_moment: n must be >= 0");
  if (!(i > 0.0)) throw validation_error("gaussian_moment: i must be positive");
  if (!(r0 > 0.0)) throw validation_error("gaussian_moment: r0 must be positive");
  const int k_top = n + 1;
  const double decay = std::exp(-2.0 * i * r0 * r0);
  double m;  // M(k) walking up from the parity ground case
  int k;
  if (k_top % 2 == 1) {
    m = (1.0 - decay) / (4.0 * i);  // M(1)
    k = 1;
  } else {
    m = std::sqrt(M_PI / (8.0 * i)) * std::erf(std::sqrt(2.0 * i) * r0);  // M(0)
    k = 0;
  }
  while (k < k_top) {
    // M(k+2) = (-r0^{k+1} e^{-2 i r0^2} + (k+1) M(k)) / (4 i)
    m = (-std::pow(r0, k + 1) * decay + (k + 1) * m) / (4.0 * i);
    k += 2;
  }
  return m;
}

double gaussian_i0_lower_bound(double i, double r0) {
  if (!(i > 0.0) || !(r0 > 0.0)) throw validation_error("gaussian_i0_lower_bound: bad arguments");
  return std::sqrt(M_PI / 2.0 * (1.0 - std::exp(-2.0 * i * r0 * r0)) / (4.0 * i));
}

OscillatoryMoments oscillatory_ijkl(double a, double b) {
  if (!(a < 0.0)) throw validation_error("oscillatory_ijkl: divergent, a must be negative");
  const double d = a * a + b * b;
  OscillatoryMoments m;
  m.I = -a / (2.0 * d);
  m.J = b / (2.0 * d);
  m.K = -(a * m.I + b * m.J) / d;
  m.L = -(a * m.J - b * m.I) / d;
  return m;
}

OscillatoryMoments oscillatory_ijkl_quadrature(double a, double b,
                                               const QuadratureSettings& settings) {
  if (!(a < 0.0)) throw validation_error("oscillatory_ijkl_quadrature: a must be negative");
  const double rt = std::sqrt(42.0 / -a);
  QuadratureSettings s = settings;
  s.initial_panels = std::max(s.initial_panels,
                              static_cast<int>(2.0 + std::abs(b) * rt * rt / M_PI));
  OscillatoryMoments m;
  m.I = quad::integrate([a, b](double r) { return r * std::exp(a * r * r) * std::cos(b * r * r); },
                        0.0, rt, s)
            .value;
  m.J = quad::integrate([a, b](double r) { return r * std::exp(a * r * r) * std::sin(b * r * r); },
                        0.0, rt, s)
            .value;
  m.K = quad::integrate(
            [a, b](double r) { return r * r * r * std::exp(a * r * r) * std::cos(b * r * r); }, 0.0,
            rt, s)
            .value;
  m.L = quad::integrate(
            [a, b](double r) { return r * r * r * std::exp(a * r * r) * std::sin(b * r * r); }, 0.0,
            rt, s)
            .value;
  return m;
}

double twodim_total(double i) {
  if (!(i > 0.0)) throw validation_error("twodim_total: i must be positive");
  const double a = -i, b = -0.5 * i;
  const double d = a * a + b * b;
  return 2.0 * M_PI * 8.0 * a * a * a * b / (d * d);
}

double twodim_total_from_moments(const OscillatoryMoments& m, double a, double b) {
  const double d = a * a + b * b;
  return -2.0 * M_PI *
         (4.0 * b * m.I + 4.0 * a * m.J - 4.0 * (a * a - b * b) * (a * m.J - b * m.I) / d -
          8.0 * a * b * (b * m.J - a * m.I) / d);
}

double family_total_lower_bound(const ExampleFamily& family) {
  const int n = family.n();
  const double area = special::sphere_area(n);
  switch (family.kind()) {
    case FamilyKind::C10:
    case FamilyKind::ClosedTorus:
    case FamilyKind::Boundary:
      return 4.0 * (n - 1) / (double(n + 2) * (n - 2)) * area * std::pow(family.r0(), n + 2);
    case FamilyKind::C21:
      return 4.0 * (n - 1) / (double(n + 2) * (n - 2)) * area;
    case FamilyKind::Integral: {
      if (n % 2 == 1) {
        const int m = (n - 1) / 2;
        double prod = 1.0;
        for (int s = 0; s <= m; ++s) prod *= (2.0 * s + 1.0) / 2.0;
        return 8.0 * (n - 1) / double(n - 2) * area * 0.5 * std::sqrt(M_PI) * prod;
      }
      const int m = n / 2;
      double fact = 1.0;
      for (int s = 1; s <= m; ++s) fact *= s;
      return 4.0 * (n - 1) / double(n - 2) * area * fact;
    }
    case FamilyKind::TwoDim:
      return 0.0;
    case FamilyKind::Below:
      throw validation_error("family_total_lower_bound: no stated bound for the below family");
  }
  throw validation_error("family_total_lower_bound: unknown kind");
}

ThresholdScan find_threshold_i0(const ExampleFamily& family, double bound, double i_max,
                                double i_start, double growth, const QuadratureSettings& settings) {
  if (!(i_max >= i_start)) throw validation_error("find_threshold_i0: i_max must be >= i_start");
  if (!(growth > 1.0)) throw validation_error("find_threshold_i0: growth must be > 1");
  ThresholdScan scan;
  for (double i = i_start; i < i_max; i *= growth) scan.tested_i.push_back(i);
  scan.tested_i.push_back(i_max);
  scan.totals.reserve(scan.tested_i.size());
  for (double i : scan.tested_i)
    scan.totals.push_back(family_total(family.with_i(i), settings).value);

  // smallest tested i from which the bound holds through i_max
  int first_ok = -1;
  for (int k = static_cast<int>(scan.totals.size()) - 1; k >= 0; --k) {
    if (scan.totals[k] >= bound)
      first_ok = k;
    else
      break;
  }
  if (first_ok < 0)
    throw threshold_not_found("find_threshold_i0: bound never holds through i_max", i_max,
                              scan.totals.back());
  scan.i0 = scan.tested_i[first_ok];
  return scan;
}

double boundary_term(int n, double i) {
  if (n < 2) throw validation_error("boundary_term: n must be >= 2");
  if (!(i >= 2.0)) throw validation_error("boundary_term: i must be >= 2");
  const double r0 = std::sqrt(M_PI / 2.0);
  const double area = special::sphere_area(n) * std::pow(r0, n - 1);
  const double s = std::sin(i * M_PI / 2.0), c = std::cos(i * M_PI / 2.0);
  return (2.0 / i * r0 * s * c + 2.0 * r0 * c) * area;
}

BoundaryAudit boundary_example_audit(int n, double i, const QuadratureSettings& settings) {
  const auto family = ExampleFamily::make(FamilyKind::Boundary, {.n = n, .i = i});
  const double coeff = 4.0 * (n - 1) / double(n - 2);
  const double area = special::sphere_area(n);
  QuadratureSettings s = settings;
  s.initial_panels = std::max(s.initial_panels, static_cast<int>(2.0 + i));

  BoundaryAudit audit;
  audit.i = i;
  audit.interior_energy =
      coeff * area *
      quad::integrate([&family, n](double r) { return family.grad_sq_integrand(r) * std::pow(r, n - 1); },
                      0.0, family.r0(), s)
          .value;
  audit.boundary_flux = coeff * boundary_term(n, i);
  audit.total_identity = audit.interior_energy - audit.boundary_flux;
  audit.total_quadrature = family_total(family, s).value;
  audit.flux_vanishes = std::abs(audit.boundary_flux) < 1e-10 * (1.0 + audit.interior_energy);
  return audit;
}

double torus_example_total(int n, double i, double r0, int res, double side, double eps) {
  if (n != 3) throw validation_error("torus_example_total: implemented for n = 3");
  if (res < 16) throw validation_error("torus_example_total: res must be >= 16");
  auto family = ExampleFamily::make(
      FamilyKind::ClosedTorus, {.n = n, .i = i, .r0 = r0, .eps = eps, .torus_side = side});
  const double h = side / res;
  const double half = 0.5 * side;
  auto min_image = [&](int k) {
    double x = k * h;
    if (x > half) x -= side;
    return x;
  };
  double total = 0.0;
  const int zmax = (n == 3) ? res : 1;
  for (int z = 0; z < zmax; ++z) {
    const double dz = (n == 3) ? min_image(z) : 0.0;
    for (int y = 0; y < res; ++y) {
      const double dy = min_image(y);
      for (int x = 0; x < res; ++x) {
        const double dx = min_image(x);
        const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (r >= family.support_radius()) continue;
        const Jet2 j = family.conformal_jet(r);
        const double lap = geom::radial_laplacian(j, r, n);
        const double R = geom::scalar_curvature_powerlaw(j.value, lap, 0.0, n);
        const double vf = geom::conformal_volume_factor(j.value, ConformalMode::PowerLaw, n);
        total += R * vf;
      }
    }
  }
  return total * std::pow(h, n);
}

}  // namespace curvlab::radial
