#pragma once

#include <string>
#include <vector>

namespace curvlab::verify {

struct CriterionResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

/// Names of the acceptance criteria, in run order.
std::vector<std::string> criterion_names();

/// Run one criterion by exact name.
CriterionResult run_criterion(const std::string& name);

/// Run every criterion whose name contains `filter` (all when empty).
std::vector<CriterionResult> run_all(const std::string& filter = "");

}  // namespace curvlab::verify
