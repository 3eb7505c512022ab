#pragma once

#include <functional>

#include "curvlab/quadrature.hpp"

namespace curvlab::geom {

using quad::QuadratureResult;
using quad::QuadratureSettings;

enum class ConformalMode {
  PowerLaw,     // g = u^{4/(n-2)} g0, n >= 3, u > 0
  Exponential,  // g = e^{2 phi} g0, any n >= 2 (2-D e^u convention: phi = u/2)
};

enum class BaseKind { EuclideanBall, FlatTorus };

/// Value and first two radial derivatives of a scalar profile at one radius.
struct Jet2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Laplacian of a radial function in R^n: u'' + (n-1) u'/r, with the r -> 0
/// limit n * u''(0).
double radial_laplacian(const Jet2& jet, double r, int n);

/// Scalar curvature of e^{2 phi} g at a point, given phi, Delta_g phi and
/// |d phi|^2_g and the base scalar curvature. Valid for n >= 2; the |d phi|^2
/// term carries an (n-2) factor and drops out automatically in dimension two.
double scalar_curvature_exponential(double phi, double lap_phi, double grad_phi_sq, double base_r,
                                    int n);

/// Scalar curvature of u^{4/(n-2)} g at a point, given u > 0 and Delta_g u.
double scalar_curvature_powerlaw(double u, double lap_u, double base_r, int n);

/// Volume-element factor of the conformal change: u^{2n/(n-2)} (power law)
/// or e^{n phi} (exponential; equals e^u in the 2-D e^u convention).
double conformal_volume_factor(double u_or_phi, ConformalMode mode, int n);

/// Total scalar curvature of the Riemannian product with the unit round
/// n_sphere-sphere: Vol(S^m) * total_M + vol_M * Vol(S^m) * m(m-1).
double product_total_scalar(double total_m, double vol_m, int n_sphere);

/// Radial conformal factor with analytic derivatives. `jet` returns the u-jet
/// in PowerLaw mode and the phi-jet in Exponential mode. Exactly one of
/// support_radius (factor trivial beyond) or truncation_radius (non-compact
/// tail cut, with tail_bound folded into the error estimate) is positive.
struct RadialConformalFactor {
  std::function<Jet2(double)> jet;
  double support_radius = 0.0;
  double truncation_radius = 0.0;
  double tail_bound = 0.0;
  double oscillation_cycles = 0.0;  // hint for pre-splitting the quadrature
};

struct ConformalMetricSpec {
  int n = 3;
  BaseKind base = BaseKind::EuclideanBall;
  double base_extent = 0.0;  // r_max (ball) or side length (torus)
  ConformalMode mode = ConformalMode::PowerLaw;
  double base_scalar_curvature = 0.0;  // both supported bases are flat
  RadialConformalFactor factor;

  void validate() const;
};

/// Total scalar curvature of the conformal metric by adaptive radial
/// quadrature: Vol(S^{n-1}) * int R(r) volfactor(r) r^{n-1} dr over the
/// support (exact truncation) or the truncation radius (tail bound added to
/// the error estimate).
QuadratureResult total_scalar_curvature(const ConformalMetricSpec& spec,
                                        const QuadratureSettings& settings = {});

/// Total scalar curvature of u^{4/(n-2)} g via the energy identity
///   4 (n-1)/(n-2) int |grad u|^2 dvol + int u^{(2n-4)/(n-2)} R(g) dvol,
/// for u - 1 compactly supported; agrees with total_scalar_curvature by the
/// divergence theorem. base_r must be 0 on an unbounded base.
QuadratureResult total_scalar_via_energy(const RadialConformalFactor& u, double base_r, int n,
                                         const QuadratureSettings& settings = {});

}  // namespace curvlab::geom
