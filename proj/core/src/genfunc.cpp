#include "dpllstat/genfunc.hpp"

#include <cmath>
#include <stdexcept>

namespace dpllstat {

namespace {

double pow_i(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

double eval_G(const ExpectationTable& table, double x1, double x2, double x3, int t) {
  if (t < 0 || t > table.n) throw std::invalid_argument("eval_G: height out of range");
  if (!table.options.keep_states)
    throw std::invalid_argument("eval_G: table was built without per-height states");
  double sum = 0.0;
  for (const auto& [v, w] : table.states[t])
    sum += w * pow_i(x1, v.c1) * pow_i(x2, v.c2) * pow_i(x3, v.c3);
  return sum;
}

RecursionReport check_recursion(const ExpectationTable& table, Recursion variant,
                                const std::vector<std::array<double, 3>>& points) {
  const bool sat = table.problem != DpProblem::col;
  switch (variant) {
    case Recursion::uc:
      if (table.problem != DpProblem::sat_uc)
        throw std::invalid_argument("check_recursion: uc variant needs a SAT-UC table");
      break;
    case Recursion::guc_resampled:
      if (table.problem != DpProblem::sat_guc ||
          table.options.guc_demoted != GucDemotedClause::resampled)
        throw std::invalid_argument(
            "check_recursion: guc_resampled variant needs a SAT-GUC table built with the "
            "resampled demoted-clause convention");
      break;
    case Recursion::guc_tracked:
      if (table.problem != DpProblem::sat_guc ||
          table.options.guc_demoted != GucDemotedClause::tracked)
        throw std::invalid_argument(
            "check_recursion: guc_tracked variant needs a SAT-GUC table built with the "
            "tracked demoted-clause convention");
      break;
    case Recursion::col:
      if (table.problem != DpProblem::col)
        throw std::invalid_argument("check_recursion: col variant needs a COL table");
      break;
  }
  if (table.options.prune != 0.0)
    throw std::invalid_argument("check_recursion: table must be built with prune = 0");
  if (table.cap_dropped_mass != 0.0)
    throw std::invalid_argument("check_recursion: table lost mass to the C1 cap");

  RecursionReport report;
  for (int t = 0; t < table.n; ++t) {
    for (const auto& p : points) {
      const double x1 = p[0], x2 = p[1], x3 = p[2];
      ResidualPoint rp;
      rp.t = t;
      rp.x = p;
      double f1, f2, f3;
      if (sat) {
        const double mu = 1.0 / (table.n - t);
        f1 = x1 + 0.5 * mu * (1.0 - 2.0 * x1);
        f2 = x2 + mu * (x1 + 1.0 - 2.0 * x2);
        f3 = x3 + 1.5 * mu * (x2 + 1.0 - 2.0 * x3);
      } else {
        const double mu = table.c / (3.0 * table.n);
        f1 = (1.0 - mu) * x1;
        f2 = (1.0 - 2.0 * mu) * x2 + 2.0 * mu * x1;
        f3 = (1.0 - 3.0 * mu) * x3 + 3.0 * mu * x2;
      }
      if (std::abs(f1) < 1e-12 || std::abs(f2) < 1e-12 || std::abs(f3) < 1e-12) {
        rp.skipped = true;
        ++report.skipped;
        report.points.push_back(rp);
        continue;
      }
      const double lhs = eval_G(table, x1, x2, x3, t + 1);
      const double g_full = eval_G(table, f1, f2, f3, t);
      const double g_no1 = eval_G(table, 0.0, f2, f3, t);
      const double g_no12 = eval_G(table, 0.0, 0.0, f3, t);
      const double g_zero = eval_G(table, 0.0, 0.0, 0.0, t);
      double rhs = 0.0;
      switch (variant) {
        case Recursion::uc:
          rhs = g_full / f1 + (2.0 - 1.0 / f1) * g_no1 - 2.0 * g_zero;
          break;
        case Recursion::guc_resampled: {
          const double a = (1.0 + f1) / f2;
          const double b = (1.0 + f2) / f3;
          rhs = g_full / f1 + (a - 1.0 / f1) * g_no1 + (b - a) * g_no12 - b * g_zero;
          break;
        }
        case Recursion::guc_tracked: {
          const double a = (1.0 + x1) / f2;
          const double b = (1.0 + x2) / f3;
          rhs = g_full / f1 + (a - 1.0 / f1) * g_no1 + (b - a) * g_no12 - b * g_zero;
          break;
        }
        case Recursion::col:
          rhs = g_full / f1 + (2.0 / f2 - 1.0 / f1) * g_no1 + (3.0 / f3 - 2.0 / f2) * g_no12;
          break;
      }
      rp.lhs = lhs;
      rp.rhs = rhs;
      rp.residual = std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
      report.max_residual = std::max(report.max_residual, rp.residual);
      report.points.push_back(rp);
    }
  }
  return report;
}

double s0(const ExpectationTable& table, int t) {
  if (table.problem == DpProblem::col)
    throw std::invalid_argument("s0: defined for SAT tables");
  if (t < 0 || t > table.n) throw std::invalid_argument("s0: height out of range");
  double sum = 0.0;
  for (int h = 0; h <= t; ++h) sum += std::ldexp(table.ls[h], t - h);
  return sum;
}

}  // namespace dpllstat
