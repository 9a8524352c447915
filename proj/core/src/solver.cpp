#include "dpllstat/solver.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dpllstat/rng.hpp"

namespace dpllstat {

std::int64_t TreeStats::total_solution_leaves() const {
  std::int64_t s = 0;
  for (auto v : solution_leaves) s += v;
  return s;
}
std::int64_t TreeStats::total_contradiction_leaves() const {
  std::int64_t s = 0;
  for (auto v : contradiction_leaves) s += v;
  return s;
}
std::int64_t TreeStats::total_leaves() const {
  return total_solution_leaves() + total_contradiction_leaves();
}
std::int64_t TreeStats::total_splits2() const {
  std::int64_t s = 0;
  for (auto v : splits2) s += v;
  return s;
}
std::int64_t TreeStats::total_splits3() const {
  std::int64_t s = 0;
  for (auto v : splits3) s += v;
  return s;
}
bool TreeStats::leaf_split_identity_holds() const {
  return total_leaves() == total_splits2() + 2 * total_splits3() + 1;
}

std::string TreeStats::to_csv() const {
  std::ostringstream out;
  out << "height,solution_leaves,contradiction_leaves,splits2,splits3\n";
  for (int t = 0; t <= n; ++t)
    out << t << ',' << solution_leaves[t] << ',' << contradiction_leaves[t] << ','
        << splits2[t] << ',' << splits3[t] << '\n';
  return out.str();
}

namespace {

// Index set with O(1) insert/remove and uniform sampling.
class DynSet {
 public:
  void init(int capacity) {
    pos_.assign(capacity, -1);
    items_.clear();
  }
  bool empty() const { return items_.empty(); }
  int size() const { return static_cast<int>(items_.size()); }
  void insert(int id) {
    pos_[id] = static_cast<int>(items_.size());
    items_.push_back(id);
  }
  void remove(int id) {
    int i = pos_[id];
    int last = items_.back();
    items_[i] = last;
    pos_[last] = i;
    items_.pop_back();
    pos_[id] = -1;
  }
  int sample(Rng& rng) const { return items_[rng.below_int(size())]; }

 private:
  std::vector<int> items_;
  std::vector<int> pos_;
};

TreeStats make_stats(int n) {
  TreeStats s;
  s.n = n;
  s.solution_leaves.assign(n + 1, 0);
  s.contradiction_leaves.assign(n + 1, 0);
  s.splits2.assign(n + 1, 0);
  s.splits3.assign(n + 1, 0);
  return s;
}

class SatEngine {
 public:
  SatEngine(const CnfInstance& f, Heuristic h, std::uint64_t seed)
      : f_(f), k_(f.k), heur_(h), rng_(seed) {
    const int n = f_.num_vars;
    const int m = f_.num_clauses();
    value_.assign(n + 1, 0);
    ntrue_.assign(m, 0);
    nfree_.assign(m, k_);
    occ_.assign(n + 1, {});
    for (int c = 0; c < m; ++c)
      for (int lit : f_.clauses[c]) occ_[std::abs(lit)].push_back(lit > 0 ? (c << 1) | 1 : c << 1);
    by_len_.resize(k_ + 1);
    for (int l = 1; l <= k_; ++l) by_len_[l].init(m);
    free_vars_.init(n + 1);
    for (int v = 1; v <= n; ++v) free_vars_.insert(v);
    for (int c = 0; c < m; ++c) by_len_[k_].insert(c);
    num_satisfied_ = 0;
    num_violated_ = 0;
  }

  SatSolveResult run(SolveMode mode, const NodeObserver& observer) {
    const int n = f_.num_vars;
    SatSolveResult res;
    res.stats = make_stats(n);
    bool halted = false;

    struct Frame {
      int edge_lit = 0;
      int child_lits[2] = {0, 0};
      int nchildren = 0;
      int next_child = -1;
    };
    std::vector<Frame> stack;
    stack.reserve(n + 2);
    stack.push_back({});

    while (!stack.empty()) {
      Frame& fr = stack.back();
      if (fr.next_child == -1) {
        const int t = static_cast<int>(stack.size()) - 1;
        ++res.stats.total_nodes;
        fr.next_child = 0;
        NodeKind kind;
        if (num_violated_ > 0) {
          ++res.stats.contradiction_leaves[t];
          kind = NodeKind::contradiction;
        } else if (num_satisfied_ == f_.num_clauses()) {
          ++res.stats.solution_leaves[t];
          res.is_sat = true;
          if (mode == SolveMode::decide) halted = true;
          kind = NodeKind::solution;
        } else if (!by_len_[1].empty()) {
          int c = by_len_[1].sample(rng_);
          fr.nchildren = 1;
          fr.child_lits[0] = free_literal(c, 0);
          kind = NodeKind::unit;
        } else {
          fr.nchildren = 2;
          ++res.stats.splits2[t];
          if (heur_ == Heuristic::uc) {
            int v = free_vars_.sample(rng_);
            int first = rng_.coin() ? v : -v;
            fr.child_lits[0] = first;
            fr.child_lits[1] = -first;
          } else {
            int len = 2;
            while (by_len_[len].empty()) ++len;
            int c = by_len_[len].sample(rng_);
            int lit = free_literal(c, rng_.below_int(len));
            fr.child_lits[0] = lit;
            fr.child_lits[1] = -lit;
          }
          kind = NodeKind::split;
        }
        if (observer) {
          NodeObservation obs;
          obs.height = t;
          obs.kind = kind;
          obs.c1 = by_len_[1].size();
          obs.c2 = k_ >= 2 ? by_len_[2].size() : 0;
          obs.c3 = k_ >= 3 ? by_len_[3].size() : 0;
          observer(obs);
        }
      }
      if (!halted && fr.next_child < fr.nchildren) {
        int lit = fr.child_lits[fr.next_child++];
        assign(lit);
        stack.push_back(Frame{lit, {0, 0}, 0, -1});
      } else {
        if (fr.edge_lit != 0) unassign(fr.edge_lit);
        stack.pop_back();
      }
    }
    // each solution leaf at height t stands for 2^(n-t) satisfying assignments
    for (int t = 0; t <= n; ++t)
      if (res.stats.solution_leaves[t] > 0)
        res.count += BigInt(res.stats.solution_leaves[t]) << (n - t);
    return res;
  }

 private:
  int free_literal(int c, int skip) const {
    for (int lit : f_.clauses[c]) {
      if (value_[std::abs(lit)] == 0) {
        if (skip == 0) return lit;
        --skip;
      }
    }
    std::abort();  // clause bookkeeping broken
  }

  void assign(int lit) {
    const int var = std::abs(lit);
    const std::int8_t val = lit > 0 ? 1 : -1;
    value_[var] = val;
    free_vars_.remove(var);
    for (int e : occ_[var]) {
      const int c = e >> 1;
      const bool lit_true = ((e & 1) != 0) == (val > 0);
      const int was_true = ntrue_[c];
      const int was_free = nfree_[c];
      --nfree_[c];
      if (lit_true) ++ntrue_[c];
      if (was_true == 0) {
        by_len_[was_free].remove(c);
        if (lit_true) {
          ++num_satisfied_;
        } else if (was_free == 1) {
          ++num_violated_;
        } else {
          by_len_[was_free - 1].insert(c);
        }
      }
    }
  }

  void unassign(int lit) {
    const int var = std::abs(lit);
    const std::int8_t val = lit > 0 ? 1 : -1;
    for (int e : occ_[var]) {
      const int c = e >> 1;
      const bool lit_true = ((e & 1) != 0) == (val > 0);
      ++nfree_[c];
      if (lit_true) --ntrue_[c];
      if (ntrue_[c] == 0) {
        const int now_free = nfree_[c];
        if (lit_true) {
          --num_satisfied_;
        } else if (now_free == 1) {
          --num_violated_;
        } else {
          by_len_[now_free - 1].remove(c);
        }
        by_len_[now_free].insert(c);
      }
    }
    value_[var] = 0;
    free_vars_.insert(var);
  }

  const CnfInstance& f_;
  int k_;
  Heuristic heur_;
  Rng rng_;
  std::vector<std::int8_t> value_;
  std::vector<int> ntrue_;
  std::vector<int> nfree_;
  std::vector<std::vector<int>> occ_;
  std::vector<DynSet> by_len_;  // unsatisfied clauses by number of free literals
  DynSet free_vars_;
  int num_satisfied_ = 0;
  int num_violated_ = 0;
};

class ColEngine {
 public:
  ColEngine(const Graph& g, std::uint64_t seed) : g_(g), adj_(g.adjacency()), rng_(seed) {
    const int n = g_.num_vertices;
    color_.assign(n + 1, -1);
    mask_.assign(n + 1, 0b111);
    by_count_.resize(4);
    for (int j = 1; j <= 3; ++j) by_count_[j].init(n + 1);
    for (int v = 1; v <= n; ++v) by_count_[3].insert(v);
    uncolored_ = n;
    num_dead_ = 0;
    trail_.reserve(16);
  }

  ColSolveResult run(SolveMode mode, const NodeObserver& observer) {
    const int n = g_.num_vertices;
    ColSolveResult res;
    res.stats = make_stats(n);
    bool halted = false;

    struct Frame {
      int edge_vertex = 0;  // vertex colored on the edge into this node (0 for root)
      int edge_color = -1;
      std::size_t trail_mark = 0;
      int decision_vertex = 0;
      int child_colors[3] = {-1, -1, -1};
      int nchildren = 0;
      int next_child = -1;
    };
    std::vector<Frame> stack;
    stack.reserve(n + 2);
    stack.push_back({});

    while (!stack.empty()) {
      Frame& fr = stack.back();
      if (fr.next_child == -1) {
        const int t = static_cast<int>(stack.size()) - 1;
        ++res.stats.total_nodes;
        fr.next_child = 0;
        NodeKind kind;
        if (num_dead_ > 0) {
          ++res.stats.contradiction_leaves[t];
          kind = NodeKind::contradiction;
        } else if (uncolored_ == 0) {
          ++res.stats.solution_leaves[t];
          res.is_colorable = true;
          if (mode == SolveMode::decide) halted = true;
          kind = NodeKind::solution;
        } else {
          int j = 1;
          while (by_count_[j].empty()) ++j;
          fr.decision_vertex = by_count_[j].sample(rng_);
          fr.nchildren = j;
          int nc = 0;
          for (int c = 0; c < 3; ++c)
            if (mask_[fr.decision_vertex] & (1u << c)) fr.child_colors[nc++] = c;
          // explore colors in uniformly shuffled order
          for (int i = nc; i > 1; --i) {
            int r = rng_.below_int(i);
            std::swap(fr.child_colors[i - 1], fr.child_colors[r]);
          }
          if (j == 1) kind = NodeKind::unit;
          else kind = NodeKind::split;
          if (j == 2) ++res.stats.splits2[t];
          if (j == 3) ++res.stats.splits3[t];
        }
        if (observer) {
          NodeObservation obs;
          obs.height = t;
          obs.kind = kind;
          obs.c1 = by_count_[1].size();
          obs.c2 = by_count_[2].size();
          obs.c3 = by_count_[3].size();
          observer(obs);
        }
      }
      if (!halted && fr.next_child < fr.nchildren) {
        int v = fr.decision_vertex;
        int c = fr.child_colors[fr.next_child++];
        std::size_t mark = trail_.size();
        assign(v, c);
        Frame child;
        child.edge_vertex = v;
        child.edge_color = c;
        child.trail_mark = mark;
        stack.push_back(child);
      } else {
        if (fr.edge_color >= 0) unassign(fr.edge_vertex, fr.edge_color, fr.trail_mark);
        stack.pop_back();
      }
    }
    res.count = res.stats.total_solution_leaves();  // one proper coloring per leaf
    return res;
  }

 private:
  void assign(int v, int c) {
    by_count_[std::popcount(mask_[v])].remove(v);
    color_[v] = c;
    --uncolored_;
    const std::uint8_t bit = static_cast<std::uint8_t>(1u << c);
    for (int w : adj_[v]) {
      if (color_[w] != -1 || !(mask_[w] & bit)) continue;
      const int pc = std::popcount(mask_[w]);
      by_count_[pc].remove(w);
      mask_[w] = static_cast<std::uint8_t>(mask_[w] & ~bit);
      if (pc == 1)
        ++num_dead_;
      else
        by_count_[pc - 1].insert(w);
      trail_.push_back(w);
    }
  }

  void unassign(int v, int c, std::size_t mark) {
    const std::uint8_t bit = static_cast<std::uint8_t>(1u << c);
    while (trail_.size() > mark) {
      int w = trail_.back();
      trail_.pop_back();
      const int pc = std::popcount(mask_[w]);
      if (pc == 0)
        --num_dead_;
      else
        by_count_[pc].remove(w);
      mask_[w] = static_cast<std::uint8_t>(mask_[w] | bit);
      by_count_[pc + 1].insert(w);
    }
    color_[v] = -1;
    ++uncolored_;
    by_count_[std::popcount(mask_[v])].insert(v);
  }

  const Graph& g_;
  std::vector<std::vector<int>> adj_;
  Rng rng_;
  std::vector<int> color_;
  std::vector<std::uint8_t> mask_;
  std::vector<DynSet> by_count_;  // uncolored vertices by available-color count
  std::vector<int> trail_;
  int uncolored_ = 0;
  int num_dead_ = 0;
};

}  // namespace

SatSolveResult dpll_count_sat(const CnfInstance& f, Heuristic h, std::uint64_t seed,
                              const NodeObserver& observer) {
  f.validate();
  SatEngine engine(f, h, seed);
  return engine.run(SolveMode::count, observer);
}

SatSolveResult dpll_decide_sat(const CnfInstance& f, Heuristic h, std::uint64_t seed,
                               const NodeObserver& observer) {
  f.validate();
  SatEngine engine(f, h, seed);
  SatSolveResult r = engine.run(SolveMode::decide, observer);
  r.count = 0;
  return r;
}

ColSolveResult dpll_col(const Graph& g, SolveMode mode, std::uint64_t seed,
                        const NodeObserver& observer) {
  g.validate();
  ColEngine engine(g, seed);
  return engine.run(mode, observer);
}

BigInt brute_force_count(const CnfInstance& f) {
  if (f.num_vars > 25) throw std::invalid_argument("brute_force_count: N > 25");
  f.validate();
  const int n = f.num_vars;
  const int m = f.num_clauses();
  std::vector<std::uint32_t> pos(m, 0), neg(m, 0);
  for (int c = 0; c < m; ++c)
    for (int lit : f.clauses[c]) {
      if (lit > 0)
        pos[c] |= 1u << (lit - 1);
      else
        neg[c] |= 1u << (-lit - 1);
    }
  std::int64_t count = 0;
  const std::uint32_t limit = n == 32 ? 0 : (1u << n);
  for (std::uint32_t a = 0;; ++a) {
    bool ok = true;
    for (int c = 0; c < m; ++c) {
      if ((a & pos[c]) == 0 && (~a & neg[c]) == 0) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
    if (a + 1 == limit) break;
  }
  return count;
}

namespace {

std::int64_t col_count_rec(const std::vector<std::vector<int>>& adj, std::vector<int>& color,
                           int v) {
  if (v == static_cast<int>(color.size())) return 1;
  std::int64_t total = 0;
  for (int c = 0; c < 3; ++c) {
    bool ok = true;
    for (int w : adj[v]) {
      if (w < v && color[w] == c) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    color[v] = c;
    total += col_count_rec(adj, color, v + 1);
  }
  color[v] = -1;
  return total;
}

}  // namespace

BigInt brute_force_col_count(const Graph& g) {
  if (g.num_vertices > 15) throw std::invalid_argument("brute_force_col_count: N > 15");
  g.validate();
  auto adj = g.adjacency();
  std::vector<int> color(g.num_vertices + 1, -1);
  return col_count_rec(adj, color, 1);
}

std::string sat_summary_json(const CnfInstance& f, Heuristic h, std::uint64_t seed,
                             const SatSolveResult& r) {
  nlohmann::json j;
  j["problem"] = "sat";
  j["n"] = f.num_vars;
  j["m"] = f.num_clauses();
  j["k"] = f.k;
  j["heuristic"] = h == Heuristic::uc ? "uc" : "guc";
  j["seed"] = seed;
  j["is_sat"] = r.is_sat;
  j["count"] = r.count.str();
  j["total_leaves"] = r.stats.total_leaves();
  return j.dump();
}

std::string col_summary_json(const Graph& g, std::uint64_t seed, const ColSolveResult& r) {
  nlohmann::json j;
  j["problem"] = "col";
  j["n"] = g.num_vertices;
  j["edges"] = g.num_edges();
  j["seed"] = seed;
  j["is_colorable"] = r.is_colorable;
  j["count"] = r.count.str();
  j["total_leaves"] = r.stats.total_leaves();
  return j.dump();
}

}  // namespace dpllstat
