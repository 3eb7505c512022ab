#include "curvlab/special.hpp"

#include <cmath>

#include "curvlab/errors.hpp"

namespace curvlab::special {

double gamma_lanczos(double x) {
  static const double g = 7.0;
  static const double coef[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,    12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection formula
    return M_PI / (std::sin(M_PI * x) * gamma_lanczos(1.0 - x));
  }
  x -= 1.0;
  double a = coef[0];
  const double t = x + g + 0.5;
  for (int k = 1; k < 9; ++k) a += coef[k] / (x + k);
  return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double unit_sphere_volume(int m) {
  if (m < 0) throw validation_error("unit_sphere_volume: m must be >= 0");
  return 2.0 * std::pow(M_PI, 0.5 * (m + 1)) / gamma_lanczos(0.5 * (m + 1));
}

double sphere_area(int n) {
  if (n < 1) throw validation_error("sphere_area: ambient dimension must be >= 1");
  return unit_sphere_volume(n - 1);
}

}  // namespace curvlab::special
