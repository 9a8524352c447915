// Generating-function view of an ExpectationTable and the closed-form height
// recursions it must satisfy, used to certify the transition kernels.

#pragma once

#include <array>
#include <vector>

#include "dpllstat/dp.hpp"

namespace dpllstat {

// G(x1,x2,x3;T) = sum over stored states of x1^C1 x2^C2 x3^C3 L(C,T).
double eval_G(const ExpectationTable& table, double x1, double x2, double x3, int t);

// Height recursion variants. guc_resampled is the closed form exact under
// the resampled demoted-clause convention; guc_tracked is the same identity
// with the coefficients (1+f1), (1+f2) replaced by (1+x1), (1+x2), exact for
// the tracked convention.
enum class Recursion { uc, guc_resampled, guc_tracked, col };

struct ResidualPoint {
  int t = 0;
  std::array<double, 3> x{};
  double lhs = 0.0, rhs = 0.0;
  double residual = 0.0;  // |lhs-rhs| / (1+|lhs|)
  bool skipped = false;   // degenerate coefficient (an f vanished)
};

struct RecursionReport {
  std::vector<ResidualPoint> points;
  double max_residual = 0.0;
  int skipped = 0;
};

// Checks the recursion at every height T in [0, N) for each evaluation
// point. Requires a table built with prune = 0 and a variant matching the
// table's problem (and, for GUC, its demoted-clause convention).
RecursionReport check_recursion(const ExpectationTable& table, Recursion variant,
                                const std::vector<std::array<double, 3>>& points);

// S0(T) = sum_{H<=T} 2^(T-H) G(0,0,0;H). For SAT tables S0(N) is the
// expected number of satisfying assignments.
double s0(const ExpectationTable& table, int t);

}  // namespace dpllstat
