#include "curvlab/conformal.hpp"

#include <cmath>

#include "curvlab/special.hpp"

namespace curvlab::geom {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw validation_error(std::string(what) + ": non-finite input");
}

QuadratureSettings with_oscillation_hint(const QuadratureSettings& settings, double cycles) {
  QuadratureSettings s = settings;
  s.initial_panels = std::max(s.initial_panels, static_cast<int>(std::min(4096.0, 2.0 + cycles)));
  return s;
}

}  // namespace

double radial_laplacian(const Jet2& jet, double r, int n) {
  if (r < 1e-12) return n * jet.d2;
  return jet.d2 + (n - 1) * jet.d1 / r;
}

double scalar_curvature_exponential(double phi, double lap_phi, double grad_phi_sq, double base_r,
                                    int n) {
  if (n < 2) throw validation_error("scalar_curvature_exponential: n must be >= 2");
  require_finite(phi, "scalar_curvature_exponential(phi)");
  require_finite(lap_phi, "scalar_curvature_exponential(lap_phi)");
  require_finite(grad_phi_sq, "scalar_curvature_exponential(grad_phi_sq)");
  const double e = std::exp(-2.0 * phi);
  return e * base_r - 2.0 * (n - 1) * e * lap_phi - double(n - 2) * (n - 1) * e * grad_phi_sq;
}

double scalar_curvature_powerlaw(double u, double lap_u, double base_r, int n) {
  if (n == 2) throw validation_error("scalar_curvature_powerlaw: unsupported dimension n = 2");
  if (n < 3) throw validation_error("scalar_curvature_powerlaw: n must be >= 3");
  if (!(u > 0.0)) throw validation_error("scalar_curvature_powerlaw: u must be positive");
  require_finite(lap_u, "scalar_curvature_powerlaw(lap_u)");
  const double p = -double(n + 2) / (n - 2);
  return std::pow(u, p) * (-4.0 * (n - 1) / (n - 2) * lap_u + base_r * u);
}

double conformal_volume_factor(double u_or_phi, ConformalMode mode, int n) {
  require_finite(u_or_phi, "conformal_volume_factor");
  if (mode == ConformalMode::PowerLaw) {
    if (n < 3) throw validation_error("conformal_volume_factor: power law requires n >= 3");
    if (!(u_or_phi > 0.0)) throw validation_error("conformal_volume_factor: u must be positive");
    return std::pow(u_or_phi, 2.0 * n / (n - 2));
  }
  if (n < 2) throw validation_error("conformal_volume_factor: n must be >= 2");
  return std::exp(n * u_or_phi);
}

double product_total_scalar(double total_m, double vol_m, int n_sphere) {
  if (n_sphere < 1) throw validation_error("product_total_scalar: n_sphere must be >= 1");
  require_finite(total_m, "product_total_scalar(total_m)");
  require_finite(vol_m, "product_total_scalar(vol_m)");
  const double vs = special::unit_sphere_volume(n_sphere);
  return vs * total_m + vol_m * vs * double(n_sphere) * (n_sphere - 1);
}

void ConformalMetricSpec::validate() const {
  if (n < 2) throw validation_error("ConformalMetricSpec: n must be >= 2");
  if (mode == ConformalMode::PowerLaw && n < 3)
    throw validation_error("ConformalMetricSpec: power-law mode requires n >= 3");
  if (!factor.jet) throw validation_error("ConformalMetricSpec: missing conformal factor");
  const double r_max = factor.support_radius > 0 ? factor.support_radius : factor.truncation_radius;
  if (!(r_max > 0)) throw validation_error("ConformalMetricSpec: factor has no integration radius");
  if (base == BaseKind::FlatTorus && r_max >= 0.5 * base_extent)
    throw geometry_error("ConformalMetricSpec: support exceeds half the torus side");
  if (base == BaseKind::EuclideanBall && base_extent > 0 && r_max > base_extent)
    throw geometry_error("ConformalMetricSpec: support exceeds the ball radius");
}

QuadratureResult total_scalar_curvature(const ConformalMetricSpec& spec,
                                        const QuadratureSettings& settings) {
  spec.validate();
  const int n = spec.n;
  const double area = special::sphere_area(n);
  const double r_max =
      spec.factor.support_radius > 0 ? spec.factor.support_radius : spec.factor.truncation_radius;

  std::function<double(double)> integrand;
  if (spec.mode == ConformalMode::PowerLaw) {
    integrand = [&spec, n](double r) {
      const Jet2 j = spec.factor.jet(r);
      const double lap = radial_laplacian(j, r, n);
      const double R = scalar_curvature_powerlaw(j.value, lap, spec.base_scalar_curvature, n);
      const double vf = conformal_volume_factor(j.value, ConformalMode::PowerLaw, n);
      return R * vf * std::pow(r, n - 1);
    };
  } else {
    integrand = [&spec, n](double r) {
      const Jet2 j = spec.factor.jet(r);
      const double lap = radial_laplacian(j, r, n);
      const double R = scalar_curvature_exponential(j.value, lap, j.d1 * j.d1,
                                                    spec.base_scalar_curvature, n);
      const double vf = conformal_volume_factor(j.value, ConformalMode::Exponential, n);
      return R * vf * std::pow(r, n - 1);
    };
  }

  QuadratureResult res = quad::integrate(
      integrand, 0.0, r_max, with_oscillation_hint(settings, spec.factor.oscillation_cycles));
  res.value *= area;
  res.abs_error = res.abs_error * area + spec.factor.tail_bound;
  return res;
}

QuadratureResult total_scalar_via_energy(const RadialConformalFactor& u, double base_r, int n,
                                         const QuadratureSettings& settings) {
  if (n < 3) throw validation_error("total_scalar_via_energy: n must be >= 3");
  if (!u.jet) throw validation_error("total_scalar_via_energy: missing factor");
  if (!(u.support_radius > 0))
    throw validation_error("total_scalar_via_energy: u - 1 must be compactly supported");
  const double area = special::sphere_area(n);
  const double coeff = 4.0 * (n - 1) / (n - 2);
  const QuadratureSettings s = with_oscillation_hint(settings, u.oscillation_cycles);

  QuadratureResult grad = quad::integrate(
      [&u, n](double r) {
        const Jet2 j = u.jet(r);
        return j.d1 * j.d1 * std::pow(r, n - 1);
      },
      0.0, u.support_radius, s);

  QuadratureResult res;
  res.value = coeff * area * grad.value;
  res.abs_error = coeff * area * grad.abs_error;
  res.evaluations = grad.evaluations;
  res.converged = grad.converged;

  if (base_r != 0.0) {
    // Only meaningful on a finite base; the integrand differs from the flat
    // case on the support alone, the caller adds base_r * vol(base) outside.
    const double q = (2.0 * n - 4.0) / (n - 2);
    QuadratureResult bg = quad::integrate(
        [&u, n, q](double r) {
          const Jet2 j = u.jet(r);
          return std::pow(j.value, q) * std::pow(r, n - 1);
        },
        0.0, u.support_radius, s);
    res.value += base_r * area * bg.value;
    res.abs_error += std::abs(base_r) * area * bg.abs_error;
    res.evaluations += bg.evaluations;
    res.converged = res.converged && bg.converged;
  }
  return res;
}

}  // namespace curvlab::geom
