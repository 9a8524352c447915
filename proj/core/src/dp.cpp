#include "dpllstat/dp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace dpllstat {

namespace {

struct Grid {
  int lo1 = 0, lo2 = 0, lo3 = 0;
  int n1 = 0, n2 = 0, n3 = 0;
  std::vector<double> v;

  static Grid make(int lo1, int hi1, int lo2, int hi2, int lo3, int hi3,
                   std::size_t max_cells) {
    if (hi1 < lo1 || hi2 < lo2 || hi3 < lo3)
      throw std::logic_error("dp_expect: empty grid box");
    Grid g;
    g.lo1 = lo1;
    g.lo2 = lo2;
    g.lo3 = lo3;
    g.n1 = hi1 - lo1 + 1;
    g.n2 = hi2 - lo2 + 1;
    g.n3 = hi3 - lo3 + 1;
    const std::size_t cells = static_cast<std::size_t>(g.n1) * g.n2 * g.n3;
    if (cells > max_cells)
      throw std::runtime_error("dp_expect: state-space estimate of " + std::to_string(cells) +
                               " cells exceeds the memory guard of " + std::to_string(max_cells));
    g.v.assign(cells, 0.0);
    return g;
  }

  bool empty() const { return v.empty(); }
  std::size_t idx(int a, int b, int c) const {
    return (static_cast<std::size_t>(a - lo1) * n2 + (b - lo2)) * n3 + (c - lo3);
  }
  double& at(int a, int b, int c) { return v[idx(a, b, c)]; }
  int hi1() const { return lo1 + n1 - 1; }
  int hi2() const { return lo2 + n2 - 1; }
  int hi3() const { return lo3 + n3 - 1; }
};

// Truncated binomial pmf: window [klo, khi] plus the discarded tail mass.
struct PmfWindow {
  int klo = 0, khi = -1;
  std::vector<double> p;
  double tail = 0.0;
};

class PmfCache {
 public:
  // p is clamped to [0,1]; callers guarantee out-of-range values are only
  // possible for counts that never occur (guarded in the sweep).
  PmfCache(double p, double tail_cut)
      : p_(std::min(1.0, std::max(0.0, p))), cut_(tail_cut) {}

  const PmfWindow& get(int n) {
    if (n >= static_cast<int>(rows_.size())) rows_.resize(n + 1);
    if (rows_[n].khi < rows_[n].klo) build(n);
    return rows_[n];
  }

  int max_moves(int n_max) {
    int w = 0;
    for (int n = 0; n <= n_max; ++n) w = std::max(w, get(n).khi);
    return w;
  }

 private:
  void build(int n) {
    auto pmf = binomial_pmf<double>(n, p_);
    PmfWindow w;
    if (cut_ <= 0.0) {
      w.klo = 0;
      w.khi = n;
      w.p = std::move(pmf);
    } else {
      double dropped = 0.0;
      int lo = 0, hi = n;
      while (lo < hi && dropped + pmf[lo] < cut_ / 2) dropped += pmf[lo++];
      while (hi > lo && dropped + pmf[hi] < cut_) dropped += pmf[hi--];
      w.klo = lo;
      w.khi = hi;
      w.p.assign(pmf.begin() + lo, pmf.begin() + hi + 1);
      w.tail = dropped;
    }
    rows_[n] = std::move(w);
  }

  double p_;
  double cut_;
  std::vector<PmfWindow> rows_;
};

struct SweepTotals {
  double pruned = 0.0;
  double cap_dropped = 0.0;
};

// Thin one class axis: each of the `count` units on the axis moves
// independently with the cache's probability. axis 3 movers arrive in C2,
// axis 2 movers arrive in C1 (subject to the cap); demote=false movers are
// satisfied clauses and vanish.
Grid thin_stage(const Grid& in, int axis, bool demote, PmfCache& cache, int c1_cap,
                SweepTotals& tot, std::size_t max_cells) {
  const int ax_hi = axis == 2 ? in.hi2() : in.hi3();
  const int moves = cache.max_moves(ax_hi);
  int hi1 = in.hi1(), hi2 = in.hi2(), hi3 = in.hi3();
  int lo2 = in.lo2, lo3 = in.lo3;
  if (axis == 3) {
    if (demote) hi2 = in.hi2() + moves;
    lo3 = std::max(0, in.lo3 - moves);
  } else {
    if (demote) hi1 = std::min(c1_cap, in.hi1() + moves);
    lo2 = std::max(0, in.lo2 - moves);
  }
  Grid out = Grid::make(in.lo1, hi1, lo2, hi2, lo3, hi3, max_cells);

  for (int a = in.lo1; a <= in.hi1(); ++a)
    for (int b = in.lo2; b <= in.hi2(); ++b)
      for (int c = in.lo3; c <= in.hi3(); ++c) {
        const double w = in.v[in.idx(a, b, c)];
        if (w == 0.0) continue;
        const int count = axis == 2 ? b : c;
        const PmfWindow& pw = cache.get(count);
        tot.pruned += w * pw.tail;
        for (int k = pw.klo; k <= pw.khi; ++k) {
          const double ww = w * pw.p[k - pw.klo];
          if (ww == 0.0) continue;
          if (axis == 3) {
            out.at(a, demote ? b + k : b, c - k) += ww;
          } else if (demote) {
            if (a + k > c1_cap) {
              tot.cap_dropped += ww;
            } else {
              out.at(a + k, b - k, c) += ww;
            }
          } else {
            out.at(a, b - k, c) += ww;
          }
        }
      }
  return out;
}

double pow_i(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

ExpectationTable dp_expect(int n, double m_or_c, DpProblem problem, const DpOptions& opt) {
  if (n < 1) throw std::invalid_argument("dp_expect: N >= 1 required");
  if (opt.prune < 0) throw std::invalid_argument("dp_expect: prune must be >= 0");
  if (opt.c1_cap < 1) throw std::invalid_argument("dp_expect: c1_cap must be >= 1");
  const bool sat = problem != DpProblem::col;

  ExpectationTable table;
  table.problem = problem;
  table.n = n;
  table.options = opt;
  if (sat) {
    table.m = static_cast<int>(std::llround(m_or_c));
    if (std::abs(m_or_c - table.m) > 1e-9 || table.m < 0)
      throw std::invalid_argument("dp_expect: SAT clause count must be a nonnegative integer");
  } else {
    table.c = m_or_c;
    if (table.c < 0 || table.c > n)
      throw std::invalid_argument("dp_expect: COL needs 0 <= c <= N");
  }
  table.states.assign(n + 1, {});
  table.ls.assign(n + 1, 0.0);
  table.lc.assign(n + 1, 0.0);
  table.mass.assign(n + 1, 0.0);

  Grid cur;
  if (sat) {
    cur = Grid::make(0, 0, 0, 0, table.m, table.m, opt.max_cells);
    cur.at(0, 0, table.m) = 1.0;
  } else {
    cur = Grid::make(0, 0, 0, 0, n, n, opt.max_cells);
    cur.at(0, 0, n) = 1.0;
  }

  const double tail_cut = opt.prune > 0 ? opt.prune * 1e-3 : 0.0;

  auto record_height = [&](const Grid& g, int t) {
    double total = 0.0;
    for (int a = g.lo1; a <= g.hi1(); ++a)
      for (int b = g.lo2; b <= g.hi2(); ++b)
        for (int c = g.lo3; c <= g.hi3(); ++c) {
          const double w = g.v[g.idx(a, b, c)];
          if (w == 0.0) continue;
          total += w;
          if (opt.keep_states) table.states[t].push_back({{a, b, c}, w});
          if (a == 0 && b == 0 && c == 0) table.ls[t] += w;
        }
    table.mass[t] = total;
  };
  record_height(cur, 0);

  SweepTotals tot;
  for (int t = 0; t < n && !cur.empty(); ++t) {
    const double mu = sat ? 1.0 / (n - t) : table.c / (3.0 * n);
    if (cur.hi2() > 0 && 2 * mu > 1.0 + 1e-12)
      throw std::logic_error("dp_expect: live 2-clauses too close to the end of the sweep");
    if (cur.hi3() > 0 && 3 * mu > 1.0 + 1e-12)
      throw std::logic_error("dp_expect: live 3-clauses too close to the end of the sweep");

    // ---- stage 1: class-specific branching -------------------------------
    const int grow1 = problem == DpProblem::sat_guc ? 1 : 0;
    Grid plain = Grid::make(0, std::min(opt.c1_cap, std::max(cur.hi1(), grow1)),
                            std::max(0, cur.lo2 - 1), cur.hi2(), std::max(0, cur.lo3 - 1),
                            cur.hi3(), opt.max_cells);
    Grid pend2;  // GUC 3-clause picks: gains one 2-clause after the channels
    bool has_pend2 = false;
    if (problem == DpProblem::sat_guc && cur.hi3() >= 1)
      pend2 = Grid::make(0, 1, 0, 0, std::max(0, cur.lo3 - 1), cur.hi3(), opt.max_cells);

    for (int a = cur.lo1; a <= cur.hi1(); ++a)
      for (int b = cur.lo2; b <= cur.hi2(); ++b)
        for (int c = cur.lo3; c <= cur.hi3(); ++c) {
          const double w = cur.v[cur.idx(a, b, c)];
          if (w == 0.0) continue;
          if (a == 0 && b == 0 && c == 0) continue;  // absorbed solution leaf
          if (sat) {
            if (a >= 1) {
              // unit propagation: the other a-1 unit clauses each survive
              // w.p. 1-mu, are satisfied w.p. mu/2 and violate the child
              // otherwise.
              const int m1 = a - 1;
              const double survive = pow_i(1.0 - mu / 2, m1);
              table.lc[t + 1] += w * (1.0 - survive);
              const double p_rem = mu >= 1.0 ? 1.0 : (mu / 2) / (1.0 - mu / 2);
              const auto pmf = binomial_pmf<double>(m1, p_rem);
              for (int r = 0; r <= m1; ++r) {
                const double ww = w * survive * pmf[r];
                if (ww != 0.0) plain.at(m1 - r, b, c) += ww;
              }
            } else if (problem == DpProblem::sat_uc) {
              plain.at(0, b, c) += 2.0 * w;
            } else if (b >= 1) {
              // GUC split on a 2-clause: one child satisfies it, in the
              // other it drops to a unit clause.
              plain.at(0, b - 1, c) += w;
              if (opt.guc_demoted == GucDemotedClause::tracked) {
                plain.at(1, b - 1, c) += w;
              } else {
                plain.at(1, b - 1, c) += w * (1.0 - mu);
                plain.at(0, b - 1, c) += w * (mu / 2);
                table.lc[t + 1] += w * (mu / 2);
              }
            } else {
              // GUC split on a 3-clause: the demoted clause joins C2 after
              // this step's thinning (tracked) or is re-randomized and
              // exposed to the step like any other 2-clause (resampled).
              plain.at(0, 0, c - 1) += w;
              has_pend2 = true;
              if (opt.guc_demoted == GucDemotedClause::tracked) {
                pend2.at(0, 0, c - 1) += w;
              } else {
                pend2.at(0, 0, c - 1) += w * (1.0 - 2.0 * mu);
                plain.at(1, 0, c - 1) += w * mu;
                plain.at(0, 0, c - 1) += w * mu;
              }
            }
          } else {
            // COL: color a minimal-list vertex (j colors available) into j
            // children; spectator 1-color vertices lose their color w.p. mu
            // and kill the child.
            const int j = a >= 1 ? 1 : (b >= 1 ? 2 : 3);
            const int m1 = a - (j == 1 ? 1 : 0);
            const int m2 = b - (j == 2 ? 1 : 0);
            const int m3 = c - (j == 3 ? 1 : 0);
            const double survive = pow_i(1.0 - mu, m1);
            table.lc[t + 1] += w * j * (1.0 - survive);
            plain.at(m1, m2, m3) += w * j * survive;
          }
        }

    // ---- stages 2-3: spectator thinning; 2-clauses first so demoted
    // 3-clauses are not thinned again this step ---------------------------
    auto run_channels = [&](Grid g) {
      if (sat) {
        PmfCache c2_demote(mu, tail_cut);
        PmfCache c2_remove(mu / (1.0 - mu), tail_cut);
        PmfCache c3_demote(1.5 * mu, tail_cut);
        PmfCache c3_remove((1.5 * mu) / (1.0 - 1.5 * mu), tail_cut);
        g = thin_stage(g, 2, true, c2_demote, opt.c1_cap, tot, opt.max_cells);
        g = thin_stage(g, 2, false, c2_remove, opt.c1_cap, tot, opt.max_cells);
        g = thin_stage(g, 3, true, c3_demote, opt.c1_cap, tot, opt.max_cells);
        g = thin_stage(g, 3, false, c3_remove, opt.c1_cap, tot, opt.max_cells);
      } else {
        PmfCache c2_demote(2.0 * mu, tail_cut);
        PmfCache c3_demote(3.0 * mu, tail_cut);
        g = thin_stage(g, 2, true, c2_demote, opt.c1_cap, tot, opt.max_cells);
        g = thin_stage(g, 3, true, c3_demote, opt.c1_cap, tot, opt.max_cells);
      }
      return g;
    };

    Grid next = run_channels(std::move(plain));
    if (has_pend2) {
      Grid side = run_channels(std::move(pend2));
      Grid merged =
          Grid::make(std::min(next.lo1, side.lo1), std::max(next.hi1(), side.hi1()),
                     std::min(next.lo2, side.lo2 + 1), std::max(next.hi2(), side.hi2() + 1),
                     std::min(next.lo3, side.lo3), std::max(next.hi3(), side.hi3()),
                     opt.max_cells);
      for (int a = next.lo1; a <= next.hi1(); ++a)
        for (int b = next.lo2; b <= next.hi2(); ++b)
          for (int c = next.lo3; c <= next.hi3(); ++c)
            merged.at(a, b, c) += next.v[next.idx(a, b, c)];
      for (int a = side.lo1; a <= side.hi1(); ++a)
        for (int b = side.lo2; b <= side.hi2(); ++b)
          for (int c = side.lo3; c <= side.hi3(); ++c)
            merged.at(a, b + 1, c) += side.v[side.idx(a, b, c)];
      next = std::move(merged);
    }

    // ---- prune and shrink ------------------------------------------------
    double vmax = 0.0;
    for (double w : next.v) vmax = std::max(vmax, w);
    const double cut = opt.prune * vmax;
    int lo1 = INT32_MAX, hi1 = -1, lo2 = INT32_MAX, hi2 = -1, lo3 = INT32_MAX, hi3 = -1;
    for (int a = next.lo1; a <= next.hi1(); ++a)
      for (int b = next.lo2; b <= next.hi2(); ++b)
        for (int c = next.lo3; c <= next.hi3(); ++c) {
          double& w = next.v[next.idx(a, b, c)];
          if (w == 0.0) continue;
          if (w < cut) {
            tot.pruned += w;
            w = 0.0;
            continue;
          }
          lo1 = std::min(lo1, a);
          hi1 = std::max(hi1, a);
          lo2 = std::min(lo2, b);
          hi2 = std::max(hi2, b);
          lo3 = std::min(lo3, c);
          hi3 = std::max(hi3, c);
        }
    if (hi1 < 0) {
      cur = Grid();
      continue;
    }
    Grid shrunk = Grid::make(lo1, hi1, lo2, hi2, lo3, hi3, opt.max_cells);
    for (int a = lo1; a <= hi1; ++a)
      for (int b = lo2; b <= hi2; ++b)
        for (int c = lo3; c <= hi3; ++c)
          shrunk.at(a, b, c) = next.v[next.idx(a, b, c)];
    cur = std::move(shrunk);
    record_height(cur, t + 1);
  }

  table.pruned_mass = tot.pruned;
  table.cap_dropped_mass = tot.cap_dropped;
  return table;
}

double ExpectationTable::value(ClauseVector v, int t) const {
  const auto& slice = states[t];
  auto it = std::lower_bound(slice.begin(), slice.end(), v,
                             [](const auto& e, const ClauseVector& key) { return e.first < key; });
  if (it != slice.end() && it->first == v) return it->second;
  return 0.0;
}

double ExpectationTable::total_solution_leaves() const {
  double s = 0;
  for (double v : ls) s += v;
  return s;
}
double ExpectationTable::total_contradiction_leaves() const {
  double s = 0;
  for (double v : lc) s += v;
  return s;
}
double ExpectationTable::total_leaves() const {
  return total_solution_leaves() + total_contradiction_leaves();
}

std::string ExpectationTable::table_csv() const {
  std::ostringstream out;
  char buf[128];
  out << "T,C1,C2,C3,L\n";
  for (int t = 0; t < static_cast<int>(states.size()); ++t)
    for (const auto& [v, w] : states[t]) {
      std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.17g\n", t, v.c1, v.c2, v.c3, w);
      out << buf;
    }
  return out.str();
}

std::string ExpectationTable::profile_csv() const {
  std::ostringstream out;
  char buf[128];
  out << "T,L_S,L_C\n";
  for (int t = 0; t <= n; ++t) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", t, ls[t], lc[t]);
    out << buf;
  }
  return out.str();
}

}  // namespace dpllstat
