#pragma once

namespace curvlab::special {

/// Gamma function by the Lanczos approximation (g = 7, 9 coefficients),
/// accurate to ~14 significant digits on the real line.
double gamma_lanczos(double x);

/// Riemannian volume of the unit m-sphere S^m: 2 pi^{(m+1)/2} / Gamma((m+1)/2).
double unit_sphere_volume(int m);

/// Area of the unit sphere S^{n-1} inside R^n (same as unit_sphere_volume(n-1)).
double sphere_area(int n);

}  // namespace curvlab::special
