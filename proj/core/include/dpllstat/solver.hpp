// Instrumented DPLL / #DPLL engines for k-SAT (UC and GUC branching) and the
// list-coloring engine for 3-COL, plus exhaustive oracles for testing.
//
// Counting mode explores the full tree and returns the exact number of
// satisfying assignments (solution leaves credited 2^(N-T)) or proper
// 3-colorings. Decision mode halts at the first solution leaf and reports
// the statistics of the explored prefix.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dpllstat/cnf.hpp"
#include "dpllstat/graph.hpp"

namespace dpllstat {

using BigInt = boost::multiprecision::cpp_int;

enum class Heuristic { uc, guc };
enum class SolveMode { count, decide };

// Per-node instrumentation: the node's height, how it was expanded and the
// residual class counts (l-clauses for SAT, j-color vertices for COL) at
// entry. Used to validate branching rules and to compare node populations
// against the expectation tables.
enum class NodeKind { solution, contradiction, unit, split };
struct NodeObservation {
  int height = 0;
  NodeKind kind = NodeKind::solution;
  std::int64_t c1 = 0, c2 = 0, c3 = 0;
};
using NodeObserver = std::function<void(const NodeObservation&)>;

// Per-height search-tree statistics of one run. Heights run 0..n.
struct TreeStats {
  int n = 0;
  std::vector<std::int64_t> solution_leaves;
  std::vector<std::int64_t> contradiction_leaves;
  std::vector<std::int64_t> splits2;
  std::vector<std::int64_t> splits3;  // 3-way splits (COL only)
  std::int64_t total_nodes = 0;

  std::int64_t total_solution_leaves() const;
  std::int64_t total_contradiction_leaves() const;
  std::int64_t total_leaves() const;
  std::int64_t total_splits2() const;
  std::int64_t total_splits3() const;

  // Binary/ternary tree accounting: leaves == 2-way splits + 2 * 3-way splits + 1.
  bool leaf_split_identity_holds() const;

  // CSV rows "height,solution_leaves,contradiction_leaves,splits2,splits3".
  std::string to_csv() const;
};

struct SatSolveResult {
  bool is_sat = false;
  BigInt count = 0;  // exact model count in count mode; 0/unknown in decide mode
  TreeStats stats;
};

struct ColSolveResult {
  bool is_colorable = false;
  BigInt count = 0;
  TreeStats stats;
};

// #DPLL (count) / DPLL (decide) with the chosen branching heuristic.
// UC: split variable uniform among unset, polarity uniform, chosen polarity
// explored first. GUC: when no 1-clause exists, pick a uniformly random
// shortest clause and a uniformly random literal in it; the satisfying branch
// is explored first. Both heuristics unit-propagate (single child) on a
// uniformly random 1-clause whenever one exists.
SatSolveResult dpll_count_sat(const CnfInstance& f, Heuristic h, std::uint64_t seed,
                              const NodeObserver& observer = {});
SatSolveResult dpll_decide_sat(const CnfInstance& f, Heuristic h, std::uint64_t seed,
                               const NodeObserver& observer = {});

// 3-COL engine: repeatedly picks a uniformly random vertex with the fewest
// available colors and branches over its colors in uniformly shuffled order;
// a forced vertex (one color) yields a single child. A child in which any
// neighbor's list empties is a contradiction leaf.
ColSolveResult dpll_col(const Graph& g, SolveMode mode, std::uint64_t seed,
                        const NodeObserver& observer = {});

// Exhaustive oracles. Guard rails: N <= 25 (SAT), N <= 15 (COL).
BigInt brute_force_count(const CnfInstance& f);
BigInt brute_force_col_count(const Graph& g);

// One-line JSON summary of a run (N, M or c-ish edge count, heuristic, seed,
// count, total leaves).
std::string sat_summary_json(const CnfInstance& f, Heuristic h, std::uint64_t seed,
                             const SatSolveResult& r);
std::string col_summary_json(const Graph& g, std::uint64_t seed, const ColSolveResult& r);

}  // namespace dpllstat
