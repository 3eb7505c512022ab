#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvlab/conformal.hpp"

namespace curvlab::radial {

using geom::ConformalMetricSpec;
using geom::ConformalMode;
using geom::Jet2;
using quad::QuadratureResult;
using quad::QuadratureSettings;

/// C^infty monotone step: 1 on [0, r0], 0 on [r0 + eps/2, inf), built from
/// s(x) = sigma(x) / (sigma(x) + sigma(1-x)) with sigma(x) = exp(-1/x).
/// Value and the first two derivatives are exact on both plateaus.
class RadialCutoff {
 public:
  RadialCutoff(double r0, double eps);

  double operator()(double r, int deriv_order) const;
  Jet2 jet(double r) const;

  double r0() const { return r0_; }
  double eps() const { return eps_; }
  double support_radius() const { return r0_ + 0.5 * eps_; }

 private:
  double r0_;
  double eps_;
};

enum class FamilyKind {
  Below,        // exp(2 f_i) g_Eucl, f_i = cutoff * (alpha/i - r^2)
  Integral,     // u_i = cutoff * i^{-1+l} e^{-i r^2} + 1, l = (n+2)/4
  C10,          // u_i = cutoff * i^{-1} sin(i r^2) + 1
  ClosedTorus,  // the C10 construction localized on a flat torus
  C21,          // u_i = cutoff_i * i^{-2} sin(i r^2) + 1, r_i = i^{2/(n+2)}
  TwoDim,       // e^{u_i} g_Eucl on R^2, u_i = e^{-i r^2} sin(-(i/2) r^2)
  Boundary,     // C10 profile restricted to the ball of radius sqrt(pi/2)
};

const char* family_name(FamilyKind kind);
std::optional<FamilyKind> family_from_name(const std::string& name);

struct FamilyParams {
  int n = 3;
  double i = 2.0;
  double r0 = 1.0;        // overridden for C21 / Boundary / Below
  double alpha = 1.0;     // Below only
  double eps = 0.0;       // transition width; 0 means the default r0/4
  double torus_side = 2.0;  // ClosedTorus only
};

class ExampleFamily {
 public:
  static ExampleFamily make(FamilyKind kind, FamilyParams params);

  ExampleFamily with_i(double i) const { return make(kind_, with_i_params(i)); }

  FamilyKind kind() const { return kind_; }
  int n() const { return p_.n; }
  double i() const { return p_.i; }
  double r0() const { return p_.r0; }
  double eps() const { return p_.eps; }
  double alpha() const { return p_.alpha; }
  double torus_side() const { return p_.torus_side; }
  ConformalMode mode() const;
  bool has_cutoff() const { return cutoff_.has_value(); }
  const RadialCutoff& cutoff() const;

  /// Radius beyond which the factor is exactly trivial (compact families) or
  /// negligible below 1e-16 (TwoDim).
  double support_radius() const;

  /// The family's conformal profile as written: u_i for power-law kinds,
  /// f_i for Below, u_i for TwoDim. Trivial value is 1 for power-law kinds
  /// and 0 for the exponential kinds.
  Jet2 factor_jet(double r) const;
  double factor(double r, int deriv_order) const;

  /// Jet handed to the curvature formulas: the u-jet in PowerLaw mode, the
  /// phi-jet in Exponential mode (TwoDim: phi = u/2).
  Jet2 conformal_jet(double r) const;

  /// |grad u_i|^2 at radius r: closed form on the cutoff plateau, analytic
  /// product-rule fallback inside the transition annulus.
  double grad_sq_integrand(double r) const;

  /// Pointwise scalar curvature R(g_i)(r) through the conformal formulas.
  double scalar_curvature(double r) const;

  ConformalMetricSpec metric_spec() const;

 private:
  ExampleFamily(FamilyKind kind, FamilyParams p);
  FamilyParams with_i_params(double i) const;
  Jet2 profile_jet(double r) const;  // inner analytic profile p(r)

  FamilyKind kind_;
  FamilyParams p_;
  std::optional<RadialCutoff> cutoff_;
  double l_ = 0.0;  // Integral exponent (n+2)/4
};

/// Total scalar curvature of the family's metric by radial quadrature.
QuadratureResult family_total(const ExampleFamily& family, const QuadratureSettings& settings = {});

/// Total via the energy identity (compact-support families only).
QuadratureResult family_total_energy(const ExampleFamily& family,
                                     const QuadratureSettings& settings = {});

/// Gaussian moment I_{n+1} = int_0^{r0} r^{n+1} e^{-2 i r^2} dr by the exact
/// integration-by-parts recurrence, grounded at
///   I_1 = (1 - e^{-2 i r0^2}) / (4 i) and I_0 = sqrt(pi/(8 i)) erf(sqrt(2 i) r0).
double gaussian_moment(int n, double i, double r0);

/// Quarter-disc lower bound for I_0: sqrt(pi/2 * (1 - e^{-2 i r0^2}) / (4 i)).
double gaussian_i0_lower_bound(double i, double r0);

struct OscillatoryMoments {
  double I = 0.0;  // int_0^inf r   e^{a r^2} cos(b r^2) dr
  double J = 0.0;  // int_0^inf r   e^{a r^2} sin(b r^2) dr
  double K = 0.0;  // int_0^inf r^3 e^{a r^2} cos(b r^2) dr
  double L = 0.0;  // int_0^inf r^3 e^{a r^2} sin(b r^2) dr
};

/// Closed forms (requires a < 0): I = -a/(2D), J = b/(2D),
/// K = -(aI + bJ)/D, L = -(aJ - bI)/D with D = a^2 + b^2.
OscillatoryMoments oscillatory_ijkl(double a, double b);

/// The same four integrals by adaptive quadrature on a truncated range.
OscillatoryMoments oscillatory_ijkl_quadrature(double a, double b,
                                               const QuadratureSettings& settings = {});

/// Closed-form value of the TwoDim family total: 2 pi 8 a^3 b / (a^2+b^2)^2
/// with a = -i, b = -i/2; algebraically 128 pi / 25 for every i > 0.
double twodim_total(double i);

/// Recombination of the four moments that produces the closed-form value
/// above; insensitive to J, so closed-form and quadrature moments agree.
double twodim_total_from_moments(const OscillatoryMoments& m, double a, double b);

/// The stated closed-form lower bound for the family's total (C10, C21,
/// ClosedTorus, Integral, Boundary interior). Throws for kinds without one.
double family_total_lower_bound(const ExampleFamily& family);

struct ThresholdScan {
  double i0 = 0.0;
  std::vector<double> tested_i;
  std::vector<double> totals;
};

/// Geometric sweep of the family total over i in [i_start, i_max]; returns the
/// smallest tested i from which every later tested total stays >= bound.
/// Throws threshold_not_found when the sweep is exhausted.
ThresholdScan find_threshold_i0(const ExampleFamily& family, double bound, double i_max,
                                double i_start = 2.0, double growth = 2.0,
                                const QuadratureSettings& settings = {});

/// Boundary flux term of the Boundary family at radius sqrt(pi/2):
/// the bracket [2 i^{-1} r0 sin(i pi/2) cos(i pi/2) + 2 r0 cos(i pi/2)]
/// times Area(boundary sphere). Vanishes exactly for odd integer i.
double boundary_term(int n, double i);

struct BoundaryAudit {
  double i = 0.0;
  double interior_energy = 0.0;  // 4 (n-1)/(n-2) int_B |grad u|^2
  double boundary_flux = 0.0;    // 4 (n-1)/(n-2) * boundary_term
  double total_identity = 0.0;   // interior_energy - boundary_flux
  double total_quadrature = 0.0; // direct int_B R dvol
  bool flux_vanishes = false;
};

/// Direct-vs-identity audit of the Boundary family for one index i.
BoundaryAudit boundary_example_audit(int n, double i, const QuadratureSettings& settings = {});

/// Total scalar curvature of the ClosedTorus family by n-dimensional grid
/// quadrature over the flat torus (res points per axis).
double torus_example_total(int n, double i, double r0, int res, double side, double eps = 0.0);

}  // namespace curvlab::radial
