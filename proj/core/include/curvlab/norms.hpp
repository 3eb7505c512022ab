#pragma once

#include <map>
#include <vector>

#include "curvlab/families.hpp"

namespace curvlab::norms {

/// Sup- and Sobolev-type norms of h = g_i - g in base-orthonormal components.
struct NormReport {
  double c0 = 0.0;                // sup |h|
  double c1 = 0.0;                // sup (|h| + |grad h|)
  double c2 = 0.0;                // sup (|h| + |grad h| + |grad^2 h|)
  std::map<double, double> w1p;   // p -> (int |h|^p + |grad h|^p dvol)^{1/p}
  long sample_count = 0;
  bool grid_capped = false;
};

/// Norms of the conformal difference h = (c(r)) * delta with
/// c = u^{4/(n-2)} - 1 (power law) or e^{2 phi} - 1 (exponential), evaluated
/// on a dense radial grid (annulus refined 10x, density grows with i up to a
/// hard cap). W^{1,p} integrals are done by adaptive quadrature.
NormReport metric_difference_norms(const radial::ExampleFamily& family,
                                   const std::vector<double>& p_list, long samples = 10000);

enum class Trend { ToZero, BoundedBelow, Inconclusive };

const char* trend_name(Trend t);

struct NormTrend {
  Trend verdict = Trend::Inconclusive;
  double fitted_rate = 0.0;  // decay exponent in 1/i from a log-log fit
  double floor_value = 0.0;  // min over the sweep
  std::vector<double> values;
};

/// Trend of one norm across the sweep: log-log fitted decay rate plus a
/// monotonicity screen. All-zero sequences classify as ToZero.
NormTrend classify_trend(const std::vector<double>& i_sweep, std::vector<double> values);

struct Classification {
  std::vector<double> i_sweep;
  NormTrend c0, c1, c2;
};

/// Sweeps the family over i and classifies each norm as tending to zero or
/// staying bounded below, with the fitted decay rate.
Classification convergence_classification(const radial::ExampleFamily& family,
                                          const std::vector<double>& i_sweep,
                                          long samples = 10000);

}  // namespace curvlab::norms
