// dpllstat command line tool: instance generation, instrumented solves,
// expectation tables, growth rates, experiment grids and the self-check
// suite.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dpllstat/asymptotics.hpp"
#include "dpllstat/checks.hpp"
#include "dpllstat/dp.hpp"
#include "dpllstat/experiment.hpp"
#include "dpllstat/genfunc.hpp"
#include "dpllstat/solver.hpp"

namespace {

using namespace dpllstat;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int resolve_m(int n, int m, double alpha, bool has_m, bool has_alpha) {
  if (has_m == has_alpha)
    throw CLI::ValidationError("exactly one of --m and --alpha is required");
  if (has_m) return m;
  const int resolved = static_cast<int>(std::llround(alpha * n));
  std::fprintf(stderr, "alpha = %g with n = %d gives m = %d clauses\n", alpha, n, resolved);
  return resolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Instrumented DPLL/#DPLL search-tree statistics for random k-SAT and 3-COL"};
  app.require_subcommand(1);

  // ---- gen-sat ----------------------------------------------------------
  auto* gen_sat = app.add_subcommand("gen-sat", "generate a random k-SAT instance (DIMACS)");
  int gs_n = 20, gs_m = 0, gs_k = 3;
  double gs_alpha = 0;
  std::uint64_t gs_seed = 0;
  bool gs_distinct = false;
  std::string gs_out;
  gen_sat->add_option("--n", gs_n, "number of variables")->required();
  auto* gs_m_opt = gen_sat->add_option("--m", gs_m, "number of clauses");
  auto* gs_a_opt = gen_sat->add_option("--alpha", gs_alpha, "clause-to-variable ratio");
  gen_sat->add_option("--k", gs_k, "clause width (default 3)");
  gen_sat->add_option("--seed", gs_seed, "RNG seed")->required();
  gen_sat->add_flag("--distinct", gs_distinct, "reject duplicate clauses");
  gen_sat->add_option("--out", gs_out, "output path (default stdout)");

  // ---- gen-graph --------------------------------------------------------
  auto* gen_graph = app.add_subcommand("gen-graph", "generate a G(N, c/N) random graph");
  int gg_n = 20;
  double gg_c = 4.0;
  std::uint64_t gg_seed = 0;
  std::string gg_out;
  gen_graph->add_option("--n", gg_n, "number of vertices")->required();
  gen_graph->add_option("--c", gg_c, "average degree")->required();
  gen_graph->add_option("--seed", gg_seed, "RNG seed")->required();
  gen_graph->add_option("--out", gg_out, "output path (default stdout)");

  // ---- solve -------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "run one instrumented solve on an instance file");
  std::string sv_in, sv_stats_out, sv_heur = "uc", sv_mode = "count";
  std::uint64_t sv_seed = 0;
  solve->add_option("--in", sv_in, "instance file (DIMACS cnf or 'p col' edge list)")
      ->required();
  solve->add_option("--heuristic", sv_heur, "uc | guc (SAT only)")
      ->check(CLI::IsMember({"uc", "guc"}));
  solve->add_option("--mode", sv_mode, "count | decide")
      ->check(CLI::IsMember({"count", "decide"}));
  solve->add_option("--seed", sv_seed, "RNG seed")->required();
  solve->add_option("--stats-out", sv_stats_out, "write the per-height CSV here");

  // ---- dp ----------------------------------------------------------------
  auto* dp = app.add_subcommand("dp", "build an exact expectation table");
  std::string dp_problem = "sat-uc", dp_out, dp_profile_out, dp_demoted = "tracked";
  int dp_n = 10, dp_m = 0, dp_cap = 64;
  double dp_alpha = 0, dp_c = 0, dp_prune = 0.0;
  dp->add_option("--problem", dp_problem, "sat-uc | sat-guc | col")
      ->check(CLI::IsMember({"sat-uc", "sat-guc", "col"}));
  dp->add_option("--n", dp_n, "instance size")->required();
  auto* dp_m_opt = dp->add_option("--m", dp_m, "clause count (SAT)");
  auto* dp_a_opt = dp->add_option("--alpha", dp_alpha, "clause ratio (SAT)");
  auto* dp_c_opt = dp->add_option("--c", dp_c, "average degree (COL)");
  dp->add_option("--prune", dp_prune, "relative pruning threshold (default 0 = exact)");
  dp->add_option("--c1-cap", dp_cap, "cap on the tracked C1 coordinate (default 64)");
  dp->add_option("--guc-demoted", dp_demoted,
                 "tracked | resampled: convention for the clause the GUC literal demotes")
      ->check(CLI::IsMember({"tracked", "resampled"}));
  dp->add_option("--out", dp_out, "state table CSV path (default stdout)");
  dp->add_option("--profile-out", dp_profile_out, "leaf-profile CSV path");

  // ---- omega -------------------------------------------------------------
  auto* omega = app.add_subcommand("omega", "growth rates and threshold constants");
  std::string om_model = "uc-sat", om_out;
  int om_k = 3, om_points = 50;
  double om_alpha = -1, om_c = -1, om_min = 1, om_max = 20;
  bool om_thresholds = false, om_table = false;
  omega->add_option("--model", om_model, "uc-sat | guc-sat | col")
      ->check(CLI::IsMember({"uc-sat", "guc-sat", "col"}));
  omega->add_option("--k", om_k, "clause width (uc-sat only; default 3)");
  omega->add_option("--alpha", om_alpha, "evaluate at this clause ratio");
  omega->add_option("--c", om_c, "evaluate at this average degree (col)");
  omega->add_flag("--thresholds", om_thresholds, "print the threshold constants");
  omega->add_flag("--table", om_table, "emit a CSV curve over a parameter range");
  omega->add_option("--min", om_min, "table range start");
  omega->add_option("--max", om_max, "table range end");
  omega->add_option("--points", om_points, "table points");
  omega->add_option("--out", om_out, "table output path (default stdout)");

  // ---- experiment ----------------------------------------------------------
  auto* experiment = app.add_subcommand("experiment", "run a Monte Carlo experiment grid");
  std::string ex_config, ex_out, ex_profile_out;
  int ex_samples = -1;
  experiment->add_option("--config", ex_config, "flat key=value config file")->required();
  experiment->add_option("--samples", ex_samples, "override the configured sample count");
  experiment->add_option("--out", ex_out, "override the report path");
  experiment->add_option("--profile-out", ex_profile_out, "override the profile path");

  // ---- check -------------------------------------------------------------
  auto* check = app.add_subcommand("check", "run the cross-layer invariant suite");
  bool ck_quick = false;
  check->add_flag("--quick", ck_quick, "smaller instances, fewer Monte Carlo runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_sat) {
      const int m = resolve_m(gs_n, gs_m, gs_alpha, gs_m_opt->count() > 0,
                              gs_a_opt->count() > 0);
      CnfInstance f = gen_ksat(gs_n, m, gs_k, gs_seed, {.distinct = gs_distinct});
      std::ostringstream head;
      head << "c dpllstat gen-sat --n " << gs_n << " --m " << m << " --k " << gs_k
           << " --seed " << gs_seed << (gs_distinct ? " --distinct" : "") << "\n";
      write_output(gs_out, head.str() + emit_dimacs(f));
    } else if (*gen_graph) {
      Graph g = gen_gnp(gg_n, gg_c, gg_seed);
      std::ostringstream head;
      head << "c dpllstat gen-graph --n " << gg_n << " --c " << gg_c << " --seed " << gg_seed
           << "\n";
      write_output(gg_out, head.str() + emit_edges(g));
    } else if (*solve) {
      const std::string text = read_file(sv_in);
      const bool is_cnf = text.find("p cnf") != std::string::npos;
      const SolveMode mode = sv_mode == "count" ? SolveMode::count : SolveMode::decide;
      if (is_cnf) {
        CnfInstance f = parse_dimacs(text);
        const Heuristic h = sv_heur == "uc" ? Heuristic::uc : Heuristic::guc;
        SatSolveResult r = mode == SolveMode::count ? dpll_count_sat(f, h, sv_seed)
                                                    : dpll_decide_sat(f, h, sv_seed);
        std::cout << sat_summary_json(f, h, sv_seed, r) << "\n";
        if (!sv_stats_out.empty()) write_output(sv_stats_out, r.stats.to_csv());
      } else {
        Graph g = parse_edges(text);
        ColSolveResult r = dpll_col(g, mode, sv_seed);
        std::cout << col_summary_json(g, sv_seed, r) << "\n";
        if (!sv_stats_out.empty()) write_output(sv_stats_out, r.stats.to_csv());
      }
    } else if (*dp) {
      DpOptions opt;
      opt.prune = dp_prune;
      opt.c1_cap = dp_cap;
      opt.guc_demoted =
          dp_demoted == "tracked" ? GucDemotedClause::tracked : GucDemotedClause::resampled;
      DpProblem problem = dp_problem == "sat-uc"
                              ? DpProblem::sat_uc
                              : dp_problem == "sat-guc" ? DpProblem::sat_guc : DpProblem::col;
      double m_or_c;
      if (problem == DpProblem::col) {
        if (dp_c_opt->count() == 0) throw CLI::ValidationError("col tables need --c");
        m_or_c = dp_c;
      } else {
        m_or_c = resolve_m(dp_n, dp_m, dp_alpha, dp_m_opt->count() > 0,
                           dp_a_opt->count() > 0);
      }
      ExpectationTable table = dp_expect(dp_n, m_or_c, problem, opt);
      write_output(dp_out, table.table_csv());
      if (!dp_profile_out.empty()) write_output(dp_profile_out, table.profile_csv());
      std::fprintf(stderr,
                   "total leaves %.17g (solution %.17g, contradiction %.17g); "
                   "pruned mass %.3g, cap-dropped %.3g\n",
                   table.total_leaves(), table.total_solution_leaves(),
                   table.total_contradiction_leaves(), table.pruned_mass,
                   table.cap_dropped_mass);
    } else if (*omega) {
      std::ostringstream out;
      if (om_table) {
        out << "# rates: log2 per variable (sat), nats per vertex (col)\n";
        if (om_model == "col") {
          out << "c,omega_s,omega_c,omega_h,argmax,boundary_flag\n";
          for (int i = 0; i < om_points; ++i) {
            const double c = om_min + (om_max - om_min) * i / (om_points - 1);
            OmegaResult r = omega_col(c);
            char buf[256];
            std::snprintf(buf, sizeof buf, "%.17g,nan,nan,%.17g,%.17g,%d\n", c, r.value,
                          r.argmax, r.boundary ? 1 : 0);
            out << buf;
          }
        } else {
          out << "alpha,omega_s,omega_c,omega_g,argmax,boundary_flag\n";
          for (int i = 0; i < om_points; ++i) {
            const double a = om_min + (om_max - om_min) * i / (om_points - 1);
            OmegaResult rc = omega_c(a, om_k);
            const double g = om_k == 3 ? omega_guc(a).value : NAN;
            char buf[256];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", a,
                          omega_s(a, om_k), rc.value, g, rc.argmax, rc.boundary ? 1 : 0);
            out << buf;
          }
        }
        write_output(om_out, out.str());
      } else if (om_model == "col") {
        if (om_c >= 0) {
          OmegaResult r = omega_col(om_c);
          std::printf("omega_h(%g) = %.10g nats (%.10g log2), argmax t = %.10g%s\n", om_c,
                      r.value, r.value / std::log(2.0), r.argmax,
                      r.boundary ? " (boundary)" : "");
        }
        if (om_thresholds || om_c < 0)
          std::printf("c_u = %.6f  (root of omega_h(c) + c/6 = 2 ln 3)\n", c_u_col());
      } else if (om_model == "guc-sat") {
        if (om_alpha > 0) {
          OmegaResult r = omega_guc(om_alpha);
          std::printf("omega_g(%g) = %.10g, argmax y2 = %.10g%s\n", om_alpha, r.value,
                      r.argmax, r.boundary ? " (boundary)" : "");
        }
        if (om_thresholds || om_alpha <= 0)
          std::printf("alpha_u^g = %.6f  (root of omega_g(a) + a log2(8/7) = 2)\n",
                      alpha_u_guc());
      } else {
        if (om_alpha >= 0) {
          OmegaResult r = omega_c(om_alpha, om_k);
          std::printf("omega_s(%g) = %.10g\nomega_c(%g) = %.10g, argmax t = %.10g%s\n",
                      om_alpha, omega_s(om_alpha, om_k), om_alpha, r.value, r.argmax,
                      r.boundary ? " (boundary)" : "");
        }
        if (om_thresholds || om_alpha < 0) {
          std::printf("alpha* = %.6f  (interior maximum overtakes t = 1)\n",
                      alpha_star(om_k));
          std::printf("alpha_u = %.6f  (root of omega_c(a,k) = 2 + a log2(1-2^-k))\n",
                      alpha_u(om_k));
        }
      }
    } else if (*experiment) {
      ExperimentConfig cfg = ExperimentConfig::parse(read_file(ex_config));
      if (ex_samples > 0) cfg.samples = ex_samples;
      if (!ex_out.empty()) cfg.out = ex_out;
      if (!ex_profile_out.empty()) cfg.profile_out = ex_profile_out;
      ExperimentResult result = run_experiment(cfg);
      write_output(cfg.out, result.report_csv());
      if (!cfg.profile_out.empty()) write_output(cfg.profile_out, result.profile_csv());
      int failed = 0;
      for (const auto& c : result.cells) failed += c.failed ? 1 : 0;
      std::fprintf(stderr, "%zu cells, %d failed; report -> %s\n", result.cells.size(),
                   failed, cfg.out.c_str());
      if (failed > 0) return 1;
    } else if (*check) {
      CheckOptions opt;
      opt.quick = ck_quick;
      auto results = run_check_suite(opt);
      std::cout << format_results(results);
      if (!all_passed(results)) {
        std::cout << "FAILED\n";
        return 1;
      }
      std::cout << "all checks passed\n";
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
