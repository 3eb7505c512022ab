// Acceptance suite runner: one PASS/FAIL line per criterion.
// Usage: curvlab_acceptance [--filter substring] [--list]

#include <cstdio>
#include <cstring>
#include <string>

#include "curvlab/verify.hpp"

int main(int argc, char** argv) {
  std::string filter;
  for (int k = 1; k < argc; ++k) {
    if (std::strcmp(argv[k], "--list") == 0) {
      for (const auto& name : curvlab::verify::criterion_names()) std::printf("%s\n", name.c_str());
      return 0;
    }
    if (std::strcmp(argv[k], "--filter") == 0 && k + 1 < argc) filter = argv[++k];
  }

  const auto results = curvlab::verify::run_all(filter);
  if (results.empty()) {
    std::fprintf(stderr, "no criterion matches filter '%s'\n", filter.c_str());
    return 2;
  }
  int failures = 0;
  for (const auto& r : results) {
    std::printf("%s %-22s (%6.2fs)%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    if (!r.passed) ++failures;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failures);
  return failures;
}
