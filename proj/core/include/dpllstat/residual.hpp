// Residual instances under partial assignments.
//
// reduce() rebuilds the residual state from scratch; the solver engines keep
// incremental equivalents and are cross-checked against these in tests.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dpllstat/cnf.hpp"
#include "dpllstat/graph.hpp"

namespace dpllstat {

// Ordered (variable, value) pairs; no variable appears twice.
struct SatAssignment {
  std::vector<std::pair<int, bool>> steps;
  int length() const { return static_cast<int>(steps.size()); }
};

// Ordered (vertex, color) pairs with colors in {0,1,2}.
struct ColAssignment {
  std::vector<std::pair<int, int>> steps;
  int length() const { return static_cast<int>(steps.size()); }
};

// An l-clause has l non-false literals; satisfied clauses are removed.
// counts[0] >= 1 iff some clause is violated.
struct SatResidual {
  std::array<std::int64_t, 4> counts{};  // C0..C3
  std::vector<std::vector<int>> clauses;  // surviving clauses, false literals stripped
  int unassigned = 0;

  bool violated() const { return counts[0] > 0; }
  bool satisfied() const { return clauses.empty(); }
};

// Surviving (uncolored) vertices with their available-color lists.
// counts[j] = number of vertices with j colors available, j in 1..3;
// counts[0] >= 1 iff some vertex ran out of colors.
struct ColResidual {
  std::array<std::int64_t, 4> counts{};
  std::vector<std::uint8_t> color_mask;  // indexed by vertex, 0 for colored ones
  int unassigned = 0;

  bool violated() const { return counts[0] > 0; }
};

SatResidual reduce(const CnfInstance& f, const SatAssignment& a);
ColResidual reduce(const Graph& g, const ColAssignment& a);

}  // namespace dpllstat
