#pragma once

#include <string>
#include <vector>

namespace giant {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  // Set on a failure that sits entirely in sub-checks whose tolerance is
  // below three standard errors of the estimator at the pinned sample size.
  bool unresolvable = false;
};

// The ten acceptance criteria, numbered 1..10. Monte Carlo criteria (7-10)
// use master seed 42 and share their n = 4000, c = 2 batches.
CheckResult acceptance_criterion(int k);

// Kernel equivalence and counting bounds up to the given size.
std::vector<CheckResult> oracle_suite(int max_nu, int max_mu);
// Oracle-scale enumeration plus theory invariants (criteria 1-6).
std::vector<CheckResult> quick_suite();

}  // namespace giant
