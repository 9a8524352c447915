// Reproducible Monte Carlo experiment orchestration.
//
// A config defines a grid of (N, alpha-or-c) cells. Each run draws a fresh
// random instance and solves it with an independent RNG stream derived from
// the master seed, the cell id and the run index; per-run tallies are exact
// integers, so reports are byte-identical for a given (config, seed)
// regardless of the thread count.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpllstat/solver.hpp"

namespace dpllstat {

std::string version_string();
std::uint64_t fnv1a64(const std::string& s);

struct ExperimentConfig {
  std::string problem = "sat";   // sat | col
  std::string heuristic = "uc";  // uc | guc (SAT only)
  std::string mode = "count";    // count | decide
  std::vector<int> n_values;
  std::vector<double> ratio_values;  // alpha for SAT, c for COL
  int samples = 1000;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double prune = 1e-30;
  int dp_max_n = 30;  // attach expectation-table reference columns when N <= this
  int threads = 0;    // 0 = hardware concurrency
  std::string out = "report.csv";
  std::string profile_out;

  // Flat "key = value" lines; '#' starts a comment. Throws on unknown keys,
  // missing n/alpha/c, or a missing seed.
  static ExperimentConfig parse(const std::string& text);
  std::string canonical() const;  // normalized text; hashed into the report
};

struct CellReport {
  int cell_id = 0;
  int n = 0;
  double ratio = 0.0;
  int m = 0;  // SAT: round(alpha*N); COL: unused
  int samples = 0;
  bool failed = false;
  std::string error;

  double mean_total = 0, se_total = 0;
  double mean_ls = 0, se_ls = 0;
  double mean_lc = 0, se_lc = 0;
  double sat_fraction = 0;  // decide mode: fraction declared satisfiable/colorable

  bool has_dp = false;
  double dp_total = 0, dp_ls = 0, dp_lc = 0;
  double omega_ref = 0;  // growth-rate prediction (log2 for SAT, nats for COL)

  // per-height Monte Carlo means and expectation-table values
  std::vector<double> mc_ls, mc_lc, dp_ls_profile, dp_lc_profile;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::string config_hash;
  std::vector<CellReport> cells;

  std::string report_csv() const;
  std::string profile_csv() const;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace dpllstat
