#include "dpllstat/kernels.hpp"

namespace dpllstat {

namespace {

template <class V>
class RowBuilder {
 public:
  void add(int c1, int c2, int c3, const V& w) { acc_[std::tuple(c1, c2, c3)] += w; }
  void add_contradiction(const V& w) { contradiction_ += w; }

  KernelRow<V> finish(ClauseVector from, int height) {
    KernelRow<V> row;
    row.from = from;
    row.height = height;
    row.contradiction_mass = contradiction_;
    row.targets.reserve(acc_.size());
    for (const auto& [key, w] : acc_)
      row.targets.push_back({{std::get<0>(key), std::get<1>(key), std::get<2>(key)}, w});
    return row;
  }

 private:
  std::map<std::tuple<int, int, int>, V> acc_;
  V contradiction_{};
};

template <class V>
V pow_int(V base, int e) {
  V r(1);
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// One assignment step, seen by a spectator j-clause: hit with probability
// j*mu, then demoted or satisfied with a fair coin (SAT).
template <class V>
struct ChannelProbs {
  V hit, down_given_hit;
};

template <class V>
ChannelProbs<V> sat_channel(int j, const V& mu) {
  return {V(j) * mu, V(1) / 2};
}

// Spread `mass` at offset c1 with m2 2-clauses and m3 3-clauses over the
// joint channel outcomes: h3 of the 3-clauses are hit and d3 of those become
// 2-clauses (the rest are satisfied), likewise (h2, d2) with demotions
// arriving in C1.
template <class V>
void emit_through_pair_channels(RowBuilder<V>& out, const V& mass, int c1, int m2, int m3,
                                const ChannelProbs<V>& ch2, const ChannelProbs<V>& ch3) {
  const auto pmf_h3 = binomial_pmf<V>(m3, ch3.hit);
  const auto pmf_h2 = binomial_pmf<V>(m2, ch2.hit);
  std::vector<std::vector<V>> pmf_d3(m3 + 1), pmf_d2(m2 + 1);
  for (int h = 0; h <= m3; ++h) pmf_d3[h] = binomial_pmf<V>(h, ch3.down_given_hit);
  for (int h = 0; h <= m2; ++h) pmf_d2[h] = binomial_pmf<V>(h, ch2.down_given_hit);
  for (int h3 = 0; h3 <= m3; ++h3) {
    if (pmf_h3[h3] == V{}) continue;
    for (int d3 = 0; d3 <= h3; ++d3) {
      const V w3 = mass * pmf_h3[h3] * pmf_d3[h3][d3];
      if (w3 == V{}) continue;
      for (int h2 = 0; h2 <= m2; ++h2) {
        if (pmf_h2[h2] == V{}) continue;
        for (int d2 = 0; d2 <= h2; ++d2) {
          const V w = w3 * pmf_h2[h2] * pmf_d2[h2][d2];
          if (w == V{}) continue;
          out.add(c1 + d2, m2 - h2 + d3, m3 - h3, w);
        }
      }
    }
  }
}

template <class V>
V mu_of(int t, int n) {
  if (t >= n) throw std::invalid_argument("kernel: height must satisfy T < N");
  return V(1) / V(n - t);
}

void check_widths(ClauseVector c, int t, int n, const char* who) {
  if (c.c3 > 0 && n - t < 3)
    throw std::invalid_argument(std::string(who) + ": C3 > 0 needs N-T >= 3");
  if (c.c2 > 0 && n - t < 2)
    throw std::invalid_argument(std::string(who) + ": C2 > 0 needs N-T >= 2");
}

}  // namespace

template <class V>
std::vector<V> binomial_pmf(int n, const V& p) {
  if (n < 0) throw std::invalid_argument("binomial_pmf: n < 0");
  if (p < V{} || p > V(1)) throw std::invalid_argument("binomial_pmf: p outside [0,1]");
  std::vector<V> pmf(n + 1, V{});
  if (n == 0 || p == V{}) {
    pmf[0] = V(1);
    return pmf;
  }
  if (p == V(1)) {
    pmf[n] = V(1);
    return pmf;
  }
  // Unnormalized recurrence from the mode keeps every ratio bounded, so this
  // neither under- nor overflows in double and stays exact for rationals.
  const V q = V(1) - p;
  int mode = static_cast<int>(static_cast<double>(n + 1) * static_cast<double>(p));
  if (mode > n) mode = n;
  pmf[mode] = V(1);
  for (int k = mode; k < n; ++k) pmf[k + 1] = pmf[k] * V(n - k) / V(k + 1) * p / q;
  for (int k = mode; k > 0; --k) pmf[k - 1] = pmf[k] * V(k) / V(n - k + 1) * q / p;
  V sum{};
  for (const V& v : pmf) sum += v;
  for (V& v : pmf) v /= sum;
  return pmf;
}

template <class V>
KernelRow<V> kernel_unit_prop(ClauseVector c, int t, int n) {
  if (c.c1 < 1) throw std::invalid_argument("kernel_unit_prop: requires C1 >= 1");
  check_widths(c, t, n, "kernel_unit_prop");
  const V mu = mu_of<V>(t, n);
  RowBuilder<V> out;

  // Each of the other C1-1 unit clauses is hit with probability mu and then
  // violates the branch with probability 1/2.
  const int m1 = c.c1 - 1;
  const V survive = pow_int(V(1) - mu / 2, m1);
  out.add_contradiction(V(1) - survive);

  const auto ch2 = sat_channel<V>(2, mu);
  const auto ch3 = sat_channel<V>(3, mu);
  // Conditioned on survival, hit unit clauses are satisfied and removed.
  const V p_rem = (mu / 2) / (V(1) - mu / 2);
  const auto pmf_r1 = binomial_pmf<V>(m1, p_rem);
  for (int r1 = 0; r1 <= m1; ++r1) {
    if (pmf_r1[r1] == V{}) continue;
    emit_through_pair_channels(out, survive * pmf_r1[r1], m1 - r1, c.c2, c.c3, ch2, ch3);
  }
  return out.finish(c, t);
}

template <class V>
KernelRow<V> kernel_split_uc(ClauseVector c, int t, int n) {
  if (c.c1 != 0) throw std::invalid_argument("kernel_split_uc: requires C1 == 0");
  if (c.is_zero()) throw std::invalid_argument("kernel_split_uc: (0,0,0) is absorbing");
  check_widths(c, t, n, "kernel_split_uc");
  const V mu = mu_of<V>(t, n);
  RowBuilder<V> out;
  // Two statistically identical children; no unit clauses exist, so neither
  // child can be violated.
  emit_through_pair_channels(out, V(2), 0, c.c2, c.c3, sat_channel<V>(2, mu),
                             sat_channel<V>(3, mu));
  return out.finish(c, t);
}

template <class V>
KernelRow<V> kernel_split_guc(ClauseVector c, int t, int n, GucDemotedClause demoted) {
  if (c.c1 != 0) throw std::invalid_argument("kernel_split_guc: requires C1 == 0");
  if (c.c2 + c.c3 < 1) throw std::invalid_argument("kernel_split_guc: needs a clause to pick");
  check_widths(c, t, n, "kernel_split_guc");
  const V mu = mu_of<V>(t, n);
  RowBuilder<V> out;
  const auto ch2 = sat_channel<V>(2, mu);
  const auto ch3 = sat_channel<V>(3, mu);

  if (c.c2 >= 1) {
    const int m2 = c.c2 - 1;
    // Satisfying branch: the picked 2-clause is removed.
    emit_through_pair_channels(out, V(1), 0, m2, c.c3, ch2, ch3);
    // Other branch: the picked 2-clause drops to a unit clause.
    if (demoted == GucDemotedClause::tracked) {
      emit_through_pair_channels(out, V(1), 1, m2, c.c3, ch2, ch3);
    } else {
      emit_through_pair_channels(out, V(1) - mu, 1, m2, c.c3, ch2, ch3);
      emit_through_pair_channels(out, mu / 2, 0, m2, c.c3, ch2, ch3);
      out.add_contradiction(mu / 2);
    }
  } else {
    const int m3 = c.c3 - 1;
    emit_through_pair_channels(out, V(1), 0, 0, m3, ch2, ch3);
    // Other branch: the picked 3-clause drops to a 2-clause, which must not
    // be thinned again this step (tracked) or is re-randomized and exposed to
    // the step like any 2-clause (resampled).
    RowBuilder<V> side;
    emit_through_pair_channels(side, V(1), 0, 0, m3, ch2, ch3);
    auto row = side.finish(c, t);
    for (const auto& tgt : row.targets) {
      if (demoted == GucDemotedClause::tracked) {
        out.add(tgt.to.c1, tgt.to.c2 + 1, tgt.to.c3, tgt.weight);
      } else {
        out.add(tgt.to.c1, tgt.to.c2 + 1, tgt.to.c3, tgt.weight * (V(1) - 2 * mu));
        out.add(tgt.to.c1 + 1, tgt.to.c2, tgt.to.c3, tgt.weight * mu);
        out.add(tgt.to.c1, tgt.to.c2, tgt.to.c3, tgt.weight * mu);
      }
    }
  }
  return out.finish(c, t);
}

template <class V>
KernelRow<V> kernel_col(ClauseVector c, int t, int n, const V& average_degree) {
  if (c.c1 + c.c2 + c.c3 != n - t)
    throw std::invalid_argument("kernel_col: needs C1+C2+C3 == N-T");
  if (c.is_zero()) throw std::invalid_argument("kernel_col: no vertices left");
  const V mu = average_degree / V(3 * n);
  if (3 * mu > V(1)) throw std::invalid_argument("kernel_col: needs c <= N");
  RowBuilder<V> out;
  const int j = c.c1 >= 1 ? 1 : (c.c2 >= 1 ? 2 : 3);
  const int m1 = c.c1 - (j == 1 ? 1 : 0);
  const int m2 = c.c2 - (j == 2 ? 1 : 0);
  const int m3 = c.c3 - (j == 3 ? 1 : 0);
  // Per child: a spectator j'-color vertex loses the assigned color with
  // probability j'*mu; losing the last color kills the child.
  const V survive = pow_int(V(1) - mu, m1);
  out.add_contradiction(V(j) * (V(1) - survive));
  const auto pmf_d3 = binomial_pmf<V>(m3, 3 * mu);
  const auto pmf_d2 = binomial_pmf<V>(m2, 2 * mu);
  for (int d3 = 0; d3 <= m3; ++d3) {
    if (pmf_d3[d3] == V{}) continue;
    for (int d2 = 0; d2 <= m2; ++d2) {
      const V w = V(j) * survive * pmf_d3[d3] * pmf_d2[d2];
      if (w == V{}) continue;
      out.add(m1 + d2, m2 - d2 + d3, m3 - d3, w);
    }
  }
  return out.finish(c, t);
}

template std::vector<double> binomial_pmf<double>(int, const double&);
template std::vector<BigRational> binomial_pmf<BigRational>(int, const BigRational&);
template KernelRow<double> kernel_unit_prop<double>(ClauseVector, int, int);
template KernelRow<BigRational> kernel_unit_prop<BigRational>(ClauseVector, int, int);
template KernelRow<double> kernel_split_uc<double>(ClauseVector, int, int);
template KernelRow<BigRational> kernel_split_uc<BigRational>(ClauseVector, int, int);
template KernelRow<double> kernel_split_guc<double>(ClauseVector, int, int, GucDemotedClause);
template KernelRow<BigRational> kernel_split_guc<BigRational>(ClauseVector, int, int,
                                                              GucDemotedClause);
template KernelRow<double> kernel_col<double>(ClauseVector, int, int, const double&);
template KernelRow<BigRational> kernel_col<BigRational>(ClauseVector, int, int,
                                                        const BigRational&);

}  // namespace dpllstat
