#pragma once

#include <stdexcept>
#include <string>

namespace curvlab {

/// Bad inputs or violated preconditions. The CLI maps these to exit code 2.
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A geometric configuration that cannot be realized (e.g. a bump that does
/// not fit inside the torus injectivity bound).
class geometry_error : public validation_error {
 public:
  using validation_error::validation_error;
};

/// Numerical failure while computing. The CLI maps these to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature did not converge within its evaluation budget. Carries the best
/// estimate obtained so far.
class accuracy_error : public numerical_error {
 public:
  accuracy_error(const std::string& what, double value, double abs_error, long evaluations)
      : numerical_error(what), value(value), abs_error(abs_error), evaluations(evaluations) {}
  double value;
  double abs_error;
  long evaluations;
};

/// A flow state stopped being admissible (positivity loss, singular metric).
class state_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

/// A step-size / stability contract was violated (CFL and friends).
class config_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

/// A threshold sweep ran out of range without the bound holding through i_max.
class threshold_not_found : public numerical_error {
 public:
  threshold_not_found(const std::string& what, double i_max, double last_total)
      : numerical_error(what), i_max(i_max), last_total(last_total) {}
  double i_max;
  double last_total;
};

}  // namespace curvlab
