// Cross-layer verification suite: brute force validates the solvers, the
// solvers validate the expectation tables, and the tables validate the
// closed-form recursions and growth rates. The CLI `check` command and the
// acceptance tests both run these.

#pragma once

#include <string>
#include <vector>

namespace dpllstat {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct CheckOptions {
  bool quick = false;  // smaller instances and fewer Monte Carlo runs
};

// Acceptance criteria, index 1..10. Index 10 runs the full invariant suite.
CheckResult run_criterion(int index, const CheckOptions& opt = {});

// Criteria 1-4 plus every module invariant; what `dpllstat check` executes.
std::vector<CheckResult> run_check_suite(const CheckOptions& opt = {});

bool all_passed(const std::vector<CheckResult>& results);
std::string format_results(const std::vector<CheckResult>& results);

}  // namespace dpllstat
