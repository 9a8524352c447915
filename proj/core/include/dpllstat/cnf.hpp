// Fixed-width random CNF instances and DIMACS text I/O.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpllstat/rng.hpp"

namespace dpllstat {

// A k-CNF formula over variables 1..num_vars. Each clause holds exactly k
// signed literals on distinct variables, sorted by variable index
// (canonical form). Clause order is preserved as generated or parsed.
struct CnfInstance {
  int num_vars = 0;
  int k = 0;
  std::vector<std::vector<int>> clauses;

  int num_clauses() const { return static_cast<int>(clauses.size()); }

  // Scans every clause for arity, variable range, distinctness and
  // complementary pairs. Throws std::invalid_argument on violation.
  void validate() const;
};

struct GenSatOptions {
  bool distinct = false;  // reject duplicate clauses instead of sampling with replacement
};

// Draws M clauses uniformly from the (N choose k) * 2^k legal clauses.
// Default mode draws independently with replacement; `distinct` rejects
// repeated clauses (and requires M not to exceed the legal-clause count).
CnfInstance gen_ksat(int num_vars, int num_clauses, int k, std::uint64_t seed,
                     const GenSatOptions& opt = {});

// Number of legal k-clauses over n variables, saturating at 2^63-1.
std::uint64_t legal_clause_count(int num_vars, int k);

// DIMACS CNF. parse accepts 'c' comment lines and a 'p cnf V C' header and
// reports malformed input with a 1-based line number. emit writes the
// canonical form (variables ascending within each clause).
CnfInstance parse_dimacs(const std::string& text);
std::string emit_dimacs(const CnfInstance& f);

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

}  // namespace dpllstat
