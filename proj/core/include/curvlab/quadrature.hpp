#pragma once

#include <functional>

#include "curvlab/errors.hpp"

namespace curvlab::quad {

struct QuadratureSettings {
  double abs_tol = 1e-10;          // absolute tolerance on the whole interval
  long max_evaluations = 1000000;  // integrand evaluation budget
  int points_per_panel = 15;       // Gauss-Legendre order per panel
  int initial_panels = 8;          // pre-split to keep oscillations honest
  bool throw_on_budget = true;     // false: return the best estimate instead
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  long evaluations = 0;
  bool converged = true;
};

/// Adaptive bisection with a fixed Gauss-Legendre rule per panel. The panel
/// error estimate is |G(panel) - G(left) - G(right)|; panels are refined
/// worst-first until the summed estimate meets abs_tol or the budget runs out.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureSettings& settings = {});

/// Nodes and weights of the order-n Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, double* nodes, double* weights);

}  // namespace curvlab::quad
