// Exact finite-N expectations of #DPLL search-tree statistics.
//
// dp_expect sweeps heights T = 0..N, propagating the expected number
// L(C,T) of surviving residual instances per clause vector through the
// transition kernels. Solution leaves are the mass absorbed at (0,0,0)
// (SAT) or the mass surviving to T = N (COL); contradiction leaves are the
// per-step kernel losses, attributed to the child height T+1.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dpllstat/kernels.hpp"

namespace dpllstat {

enum class DpProblem { sat_uc, sat_guc, col };

struct DpOptions {
  double prune = 0.0;  // relative per-height threshold; 0 keeps every state
  int c1_cap = 64;     // C1 beyond the cap is dropped, with the mass reported
  GucDemotedClause guc_demoted = GucDemotedClause::tracked;
  bool keep_states = true;            // store per-height state maps (needed by eval_G)
  std::size_t max_cells = 60000000;   // memory guard for one height buffer
};

struct ExpectationTable {
  DpProblem problem = DpProblem::sat_uc;
  int n = 0;
  int m = 0;       // SAT: number of clauses
  double c = 0.0;  // COL: average degree
  DpOptions options;

  // states[t]: (clause vector, L) sorted by vector, zero entries omitted.
  // The absorbing (0,0,0) entry is stored alongside the live states.
  std::vector<std::vector<std::pair<ClauseVector, double>>> states;
  std::vector<double> ls;  // expected solution leaves created at height T
  std::vector<double> lc;  // expected contradiction leaves at height T
  std::vector<double> mass;  // total stored mass per height (live + absorbed)
  double pruned_mass = 0.0;
  double cap_dropped_mass = 0.0;

  double value(ClauseVector v, int t) const;
  double total_solution_leaves() const;
  double total_contradiction_leaves() const;
  double total_leaves() const;

  std::string table_csv() const;    // T,C1,C2,C3,L
  std::string profile_csv() const;  // T,L_S,L_C
};

// m_or_c is the clause count M for SAT problems (must be integral) and the
// average degree c for COL. Throws std::runtime_error when the state space
// would exceed options.max_cells, reporting the estimate.
ExpectationTable dp_expect(int n, double m_or_c, DpProblem problem, const DpOptions& opt = {});

}  // namespace dpllstat
