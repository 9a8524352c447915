#include "dpllstat/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dpllstat/asymptotics.hpp"
#include "dpllstat/dp.hpp"
#include "dpllstat/rng.hpp"

namespace dpllstat {

std::string version_string() { return "dpllstat 0.1.0"; }

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  bool ratio_is_alpha = false, ratio_is_c = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "problem") {
        cfg.problem = value;
      } else if (key == "heuristic") {
        cfg.heuristic = value;
      } else if (key == "mode") {
        cfg.mode = value;
      } else if (key == "n") {
        for (const auto& tok : split(value, ',')) cfg.n_values.push_back(std::stoi(trim(tok)));
      } else if (key == "alpha" || key == "c") {
        (key == "alpha" ? ratio_is_alpha : ratio_is_c) = true;
        for (const auto& tok : split(value, ','))
          cfg.ratio_values.push_back(std::stod(trim(tok)));
      } else if (key == "samples") {
        cfg.samples = std::stoi(value);
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
        cfg.seed_set = true;
      } else if (key == "prune") {
        cfg.prune = std::stod(value);
      } else if (key == "dp_max_n") {
        cfg.dp_max_n = std::stoi(value);
      } else if (key == "threads") {
        cfg.threads = std::stoi(value);
      } else if (key == "out") {
        cfg.out = value;
      } else if (key == "profile_out") {
        cfg.profile_out = value;
      } else {
        throw std::runtime_error("unknown key '" + key + "'");
      }
    } catch (const std::runtime_error&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (cfg.problem != "sat" && cfg.problem != "col")
    throw std::runtime_error("config: problem must be sat or col");
  if (cfg.heuristic != "uc" && cfg.heuristic != "guc")
    throw std::runtime_error("config: heuristic must be uc or guc");
  if (cfg.mode != "count" && cfg.mode != "decide")
    throw std::runtime_error("config: mode must be count or decide");
  if (cfg.n_values.empty()) throw std::runtime_error("config: n is required");
  if (cfg.ratio_values.empty())
    throw std::runtime_error("config: alpha (sat) or c (col) is required");
  if (cfg.problem == "sat" && ratio_is_c)
    throw std::runtime_error("config: sat experiments take alpha, not c");
  if (cfg.problem == "col" && ratio_is_alpha)
    throw std::runtime_error("config: col experiments take c, not alpha");
  if (!cfg.seed_set) throw std::runtime_error("config: seed is required for randomized runs");
  if (cfg.samples < 1) throw std::runtime_error("config: samples must be >= 1");
  return cfg;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "problem=" << problem << "\nheuristic=" << heuristic << "\nmode=" << mode << "\nn=";
  for (std::size_t i = 0; i < n_values.size(); ++i) out << (i ? "," : "") << n_values[i];
  out << "\n" << (problem == "sat" ? "alpha=" : "c=");
  for (std::size_t i = 0; i < ratio_values.size(); ++i)
    out << (i ? "," : "") << fmt17(ratio_values[i]);
  out << "\nsamples=" << samples << "\nseed=" << seed << "\nprune=" << fmt17(prune)
      << "\ndp_max_n=" << dp_max_n << "\n";
  return out.str();
}

namespace {

struct RunTally {
  std::int64_t total = 0, ls = 0, lc = 0;
  bool sat = false;
};

struct CellAccumulator {
  std::vector<RunTally> runs;
  // exact per-height sums; integer, so merge order cannot matter
  std::vector<std::int64_t> ls_sum, lc_sum;
};

double mean_of(const std::vector<RunTally>& runs, std::int64_t RunTally::*field) {
  double s = 0;
  for (const auto& r : runs) s += static_cast<double>(r.*field);
  return s / static_cast<double>(runs.size());
}

double se_of(const std::vector<RunTally>& runs, std::int64_t RunTally::*field) {
  const std::size_t n = runs.size();
  if (n < 2) return 0.0;
  const double m = mean_of(runs, field);
  double ss = 0;
  for (const auto& r : runs) {
    const double d = static_cast<double>(r.*field) - m;
    ss += d * d;
  }
  return std::sqrt(ss / (static_cast<double>(n) - 1.0) / static_cast<double>(n));
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;
  result.config = config;
  char hash_hex[32];
  std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config.canonical())));
  result.config_hash = hash_hex;

  const bool sat = config.problem == "sat";
  const Heuristic heur = config.heuristic == "uc" ? Heuristic::uc : Heuristic::guc;
  const bool count_mode = config.mode == "count";

  int num_threads = config.threads > 0
                        ? config.threads
                        : std::max(1u, std::thread::hardware_concurrency());

  int cell_id = 0;
  for (int n : config.n_values) {
    for (double ratio : config.ratio_values) {
      CellReport cell;
      cell.cell_id = cell_id;
      cell.n = n;
      cell.ratio = ratio;
      cell.samples = config.samples;
      if (sat) cell.m = static_cast<int>(std::llround(ratio * n));
      try {
        CellAccumulator acc;
        acc.runs.assign(config.samples, {});
        acc.ls_sum.assign(n + 1, 0);
        acc.lc_sum.assign(n + 1, 0);

        auto work = [&](int thread_idx, std::vector<std::int64_t>& ls_sum,
                        std::vector<std::int64_t>& lc_sum) {
          for (int run = thread_idx; run < config.samples; run += num_threads) {
            const std::uint64_t gen_seed =
                derive_seed(config.seed, static_cast<std::uint64_t>(cell.cell_id),
                            2 * static_cast<std::uint64_t>(run));
            const std::uint64_t solve_seed =
                derive_seed(config.seed, static_cast<std::uint64_t>(cell.cell_id),
                            2 * static_cast<std::uint64_t>(run) + 1);
            TreeStats stats;
            bool found = false;
            if (sat) {
              CnfInstance f = gen_ksat(n, cell.m, 3, gen_seed);
              SatSolveResult r = count_mode ? dpll_count_sat(f, heur, solve_seed)
                                            : dpll_decide_sat(f, heur, solve_seed);
              stats = std::move(r.stats);
              found = r.is_sat;
            } else {
              Graph g = gen_gnp(n, ratio, gen_seed);
              ColSolveResult r = dpll_col(
                  g, count_mode ? SolveMode::count : SolveMode::decide, solve_seed);
              stats = std::move(r.stats);
              found = r.is_colorable;
            }
            RunTally tally;
            tally.total = stats.total_leaves();
            tally.ls = stats.total_solution_leaves();
            tally.lc = stats.total_contradiction_leaves();
            tally.sat = found;
            acc.runs[run] = tally;
            for (int t = 0; t <= n; ++t) {
              ls_sum[t] += stats.solution_leaves[t];
              lc_sum[t] += stats.contradiction_leaves[t];
            }
          }
        };

        if (num_threads == 1) {
          work(0, acc.ls_sum, acc.lc_sum);
        } else {
          std::vector<std::vector<std::int64_t>> ls_parts(num_threads), lc_parts(num_threads);
          std::vector<std::thread> pool;
          for (int i = 0; i < num_threads; ++i) {
            ls_parts[i].assign(n + 1, 0);
            lc_parts[i].assign(n + 1, 0);
            pool.emplace_back(work, i, std::ref(ls_parts[i]), std::ref(lc_parts[i]));
          }
          for (auto& th : pool) th.join();
          for (int i = 0; i < num_threads; ++i)
            for (int t = 0; t <= n; ++t) {
              acc.ls_sum[t] += ls_parts[i][t];
              acc.lc_sum[t] += lc_parts[i][t];
            }
        }

        cell.mean_total = mean_of(acc.runs, &RunTally::total);
        cell.se_total = se_of(acc.runs, &RunTally::total);
        cell.mean_ls = mean_of(acc.runs, &RunTally::ls);
        cell.se_ls = se_of(acc.runs, &RunTally::ls);
        cell.mean_lc = mean_of(acc.runs, &RunTally::lc);
        cell.se_lc = se_of(acc.runs, &RunTally::lc);
        std::int64_t nsat = 0;
        for (const auto& r : acc.runs) nsat += r.sat ? 1 : 0;
        cell.sat_fraction = static_cast<double>(nsat) / config.samples;
        cell.mc_ls.assign(n + 1, 0);
        cell.mc_lc.assign(n + 1, 0);
        for (int t = 0; t <= n; ++t) {
          cell.mc_ls[t] = static_cast<double>(acc.ls_sum[t]) / config.samples;
          cell.mc_lc[t] = static_cast<double>(acc.lc_sum[t]) / config.samples;
        }

        // reference values: expectation table (count-mode semantics) and the
        // asymptotic growth rate
        if (n <= config.dp_max_n && count_mode) {
          DpOptions opt;
          opt.prune = config.prune;
          opt.keep_states = false;
          opt.guc_demoted = GucDemotedClause::tracked;  // comparable to the engine
          const DpProblem problem =
              sat ? (heur == Heuristic::uc ? DpProblem::sat_uc : DpProblem::sat_guc)
                  : DpProblem::col;
          ExpectationTable table = dp_expect(n, sat ? double(cell.m) : ratio, problem, opt);
          cell.has_dp = true;
          cell.dp_total = table.total_leaves();
          cell.dp_ls = table.total_solution_leaves();
          cell.dp_lc = table.total_contradiction_leaves();
          cell.dp_ls_profile = table.ls;
          cell.dp_lc_profile = table.lc;
        }
        if (sat && heur == Heuristic::uc)
          cell.omega_ref = omega_c(ratio, 3).value;
        else if (sat)
          cell.omega_ref = omega_guc(ratio).value;
        else
          cell.omega_ref = omega_col(ratio).value;
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
      }
      result.cells.push_back(std::move(cell));
      ++cell_id;
    }
  }
  return result;
}

std::string ExperimentResult::report_csv() const {
  std::ostringstream out;
  out << "# " << version_string() << " report v1; rates are log2 per variable for sat, "
      << "nats per vertex for col\n";
  out << "version,config_hash,seed,problem,heuristic,mode,cell,n,ratio,m,samples,status,"
         "sat_fraction,mc_total_mean,mc_total_se,mc_ls_mean,mc_ls_se,mc_lc_mean,mc_lc_se,"
         "dp_total,dp_ls,dp_lc,dp_log2_total_over_n,omega_ref\n";
  for (const auto& c : cells) {
    out << version_string() << ',' << config_hash << ',' << config.seed << ','
        << config.problem << ',' << config.heuristic << ',' << config.mode << ','
        << c.cell_id << ',' << c.n << ',' << fmt17(c.ratio) << ',' << c.m << ','
        << c.samples << ',';
    if (c.failed) {
      std::string msg = c.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out << "failed:" << msg << ",,,,,,,,,,,,\n";
      continue;
    }
    out << "ok," << fmt17(c.sat_fraction) << ',' << fmt17(c.mean_total) << ','
        << fmt17(c.se_total) << ',' << fmt17(c.mean_ls) << ',' << fmt17(c.se_ls) << ','
        << fmt17(c.mean_lc) << ',' << fmt17(c.se_lc) << ',';
    if (c.has_dp) {
      out << fmt17(c.dp_total) << ',' << fmt17(c.dp_ls) << ',' << fmt17(c.dp_lc) << ','
          << fmt17(std::log2(std::max(c.dp_total, 1e-300)) / c.n) << ',';
    } else {
      out << "nan,nan,nan,nan,";
    }
    out << fmt17(c.omega_ref) << '\n';
  }
  return out.str();
}

std::string ExperimentResult::profile_csv() const {
  std::ostringstream out;
  out << "# " << version_string() << " profile v1\n";
  out << "config_hash,cell,n,ratio,height,mc_ls_mean,mc_lc_mean,dp_ls,dp_lc\n";
  for (const auto& c : cells) {
    if (c.failed) continue;
    for (int t = 0; t <= c.n; ++t) {
      out << config_hash << ',' << c.cell_id << ',' << c.n << ',' << fmt17(c.ratio) << ','
          << t << ',' << fmt17(c.mc_ls[t]) << ',' << fmt17(c.mc_lc[t]) << ',';
      if (c.has_dp)
        out << fmt17(c.dp_ls_profile[t]) << ',' << fmt17(c.dp_lc_profile[t]) << '\n';
      else
        out << "nan,nan\n";
    }
  }
  return out.str();
}

}  // namespace dpllstat
