#include "dpllstat/cnf.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <unordered_set>

namespace dpllstat {

void CnfInstance::validate() const {
  if (num_vars <= 0) throw std::invalid_argument("num_vars must be positive");
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  for (const auto& cl : clauses) {
    if (static_cast<int>(cl.size()) != k)
      throw std::invalid_argument("clause arity differs from k");
    for (std::size_t i = 0; i < cl.size(); ++i) {
      int lit = cl[i];
      int var = std::abs(lit);
      if (lit == 0 || var > num_vars)
        throw std::invalid_argument("literal out of range");
      for (std::size_t j = i + 1; j < cl.size(); ++j) {
        if (std::abs(cl[j]) == var)
          throw std::invalid_argument("clause repeats a variable");
      }
    }
  }
}

std::uint64_t legal_clause_count(int num_vars, int k) {
  // (n choose k) * 2^k with saturation.
  const std::uint64_t cap = UINT64_MAX / 4;
  std::uint64_t c = 1;
  for (int i = 0; i < k; ++i) {
    if (c > cap) return INT64_MAX;
    c = c * static_cast<std::uint64_t>(num_vars - i) / static_cast<std::uint64_t>(i + 1);
  }
  for (int i = 0; i < k; ++i) {
    if (c > cap) return INT64_MAX;
    c *= 2;
  }
  return std::min<std::uint64_t>(c, INT64_MAX);
}

namespace {

std::vector<int> canonical_clause(std::vector<int> lits) {
  std::sort(lits.begin(), lits.end(),
            [](int a, int b) { return std::abs(a) < std::abs(b); });
  return lits;
}

std::uint64_t clause_key(const std::vector<int>& cl, int num_vars) {
  // Injective for canonical clauses as long as (2*num_vars+1)^k fits, which
  // holds for every N the distinct mode is used at in practice.
  std::uint64_t key = 0;
  const std::uint64_t base = 2 * static_cast<std::uint64_t>(num_vars) + 1;
  for (int lit : cl) {
    std::uint64_t code = lit > 0 ? static_cast<std::uint64_t>(lit)
                                 : static_cast<std::uint64_t>(num_vars - lit);
    key = key * base + code;
  }
  return key;
}

}  // namespace

CnfInstance gen_ksat(int num_vars, int num_clauses, int k, std::uint64_t seed,
                     const GenSatOptions& opt) {
  if (k < 2) throw std::invalid_argument("gen_ksat: k must be >= 2");
  if (num_vars < k) throw std::invalid_argument("gen_ksat: need N >= k to form a clause");
  if (num_clauses < 0) throw std::invalid_argument("gen_ksat: M must be >= 0");
  if (opt.distinct &&
      static_cast<std::uint64_t>(num_clauses) > legal_clause_count(num_vars, k))
    throw std::invalid_argument("gen_ksat: M exceeds the number of legal clauses");

  Rng rng(seed);
  CnfInstance f;
  f.num_vars = num_vars;
  f.k = k;
  f.clauses.reserve(num_clauses);

  std::unordered_set<std::uint64_t> seen;
  std::vector<int> lits(k);
  std::vector<char> picked(num_vars + 1, 0);
  while (f.num_clauses() < num_clauses) {
    for (int j = 0; j < k; ++j) {
      int var;
      do {
        var = 1 + rng.below_int(num_vars);
      } while (picked[var]);
      picked[var] = 1;
      lits[j] = rng.coin() ? var : -var;
    }
    for (int j = 0; j < k; ++j) picked[std::abs(lits[j])] = 0;
    auto cl = canonical_clause(lits);
    if (opt.distinct && !seen.insert(clause_key(cl, num_vars)).second) continue;
    f.clauses.push_back(std::move(cl));
  }
  return f;
}

CnfInstance parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  CnfInstance f;
  int declared_clauses = -1;
  std::vector<int> current;
  int clause_start_line = 0;

  auto finish_clause = [&](int at_line) {
    if (f.k == 0) f.k = static_cast<int>(current.size());
    if (static_cast<int>(current.size()) != f.k)
      throw ParseError(at_line, "clause has " + std::to_string(current.size()) +
                                    " literals, expected " + std::to_string(f.k));
    std::vector<char> seen(f.num_vars + 1, 0);
    for (int lit : current) {
      int var = std::abs(lit);
      if (seen[var]) throw ParseError(at_line, "duplicate variable " + std::to_string(var) +
                                                   " in clause");
      seen[var] = 1;
    }
    f.clauses.push_back(canonical_clause(current));
    current.clear();
  };

  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") continue;
    if (tok == "p") {
      std::string fmt;
      if (!(ls >> fmt) || fmt != "cnf")
        throw ParseError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
      if (!(ls >> f.num_vars >> declared_clauses) || f.num_vars <= 0 || declared_clauses < 0)
        throw ParseError(lineno, "malformed header counts");
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, "literal before 'p cnf' header");
    ls.clear();
    ls.str(line);
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (current.empty()) throw ParseError(lineno, "empty clause");
        finish_clause(lineno);
        clause_start_line = 0;
        continue;
      }
      if (std::abs(lit) > f.num_vars)
        throw ParseError(lineno, "literal " + std::to_string(lit) + " out of range");
      if (current.empty()) clause_start_line = lineno;
      current.push_back(lit);
    }
    if (!ls.eof()) throw ParseError(lineno, "unexpected token");
  }
  if (!have_header) throw ParseError(lineno, "missing 'p cnf' header");
  if (!current.empty())
    throw ParseError(clause_start_line, "clause not terminated with 0");
  if (f.num_clauses() != declared_clauses)
    throw ParseError(lineno, "clause count differs from header");
  if (f.k == 0) f.k = 3;  // arbitrary for an empty formula
  f.validate();
  return f;
}

std::string emit_dimacs(const CnfInstance& f) {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "p cnf %d %d\n", f.num_vars, f.num_clauses());
  out += buf;
  for (const auto& cl : f.clauses) {
    for (int lit : cl) {
      std::snprintf(buf, sizeof buf, "%d ", lit);
      out += buf;
    }
    out += "0\n";
  }
  return out;
}

}  // namespace dpllstat
