#pragma once

#include <string>
#include <vector>

namespace ncp {

/// Outcome of one consistency check: the largest deviation observed between
/// the two computation routes, and the tolerance it was held against.
struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckResult> results;

  bool all_passed() const {
    for (const auto& r : results) {
      if (!r.passed) return false;
    }
    return true;
  }
};

/// Runs the cross-module oracle battery: partition counts against closed
/// recurrences, moment/cumulant round trips, closed-form process cumulants
/// against the Fock realization, the free mixed-moment recursion against
/// operator models, and the discretized flow against exact semicircle
/// moments.  filter keeps only checks whose name contains the substring.
/// A nonzero perturbation is added to every observed deviation before the
/// verdict, so any value well above the tolerances forces a full failure
/// (negative-control hook for the exit-code path).
CheckReport check_suite(const std::string& filter = "", double perturbation = 0.0);

}  // namespace ncp
