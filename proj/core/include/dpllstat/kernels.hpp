// Clause-vector transition kernels.
//
// A residual instance is summarized by (C1,C2,C3), the counts of 1-, 2- and
// 3-clauses (SAT) or of vertices with 1, 2, 3 available colors (COL). One
// assignment step maps a state to a weighted set of successor states; weights
// are expected child multiplicities, so a row sums to the expected number of
// surviving children (1 for unit propagation up to contradiction losses,
// 2 or 3 for splits). All kernels are templated on the scalar so identities
// can be checked in exact rational arithmetic.

#pragma once

#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dpllstat {

using BigRational = boost::multiprecision::cpp_rational;

struct ClauseVector {
  int c1 = 0, c2 = 0, c3 = 0;
  friend auto operator<=>(const ClauseVector&, const ClauseVector&) = default;
  bool is_zero() const { return c1 == 0 && c2 == 0 && c3 == 0; }
};

// Convention for the clause the GUC literal demotes on its unsatisfying
// branch. `tracked` keeps the clause's actual variables (it cannot be touched
// again by the same assignment), matching the procedure exactly. `resampled`
// re-randomizes the demoted clause over all variables unset before the step,
// which is the convention under which the closed-form height recursion for
// GUC holds exactly; it costs mass mu/2 at 2-clause splits.
enum class GucDemotedClause { tracked, resampled };

template <class V>
struct KernelTarget {
  ClauseVector to;
  V weight{};
};

template <class V>
struct KernelRow {
  ClauseVector from;
  int height = 0;
  std::vector<KernelTarget<V>> targets;  // aggregated, sorted by target state
  V contradiction_mass{};

  V target_mass() const {
    V s{};
    for (const auto& t : targets) s += t.weight;
    return s;
  }
};

// Bin(n,p) pmf as a dense vector, exact for rational V. p must be in [0,1].
template <class V>
std::vector<V> binomial_pmf(int n, const V& p);

// SAT kernels, mu = 1/(N-T). Unit propagation requires C1 >= 1; splits
// require C1 == 0 and a nonzero vector.
template <class V>
KernelRow<V> kernel_unit_prop(ClauseVector c, int t, int n);
template <class V>
KernelRow<V> kernel_split_uc(ClauseVector c, int t, int n);
template <class V>
KernelRow<V> kernel_split_guc(ClauseVector c, int t, int n,
                              GucDemotedClause demoted = GucDemotedClause::tracked);

// COL kernel, mu = c/(3N); picks a vertex of minimal color count j and
// produces j children. average_degree is the c parameter.
template <class V>
KernelRow<V> kernel_col(ClauseVector c, int t, int n, const V& average_degree);

extern template std::vector<double> binomial_pmf<double>(int, const double&);
extern template std::vector<BigRational> binomial_pmf<BigRational>(int, const BigRational&);
extern template KernelRow<double> kernel_unit_prop<double>(ClauseVector, int, int);
extern template KernelRow<BigRational> kernel_unit_prop<BigRational>(ClauseVector, int, int);
extern template KernelRow<double> kernel_split_uc<double>(ClauseVector, int, int);
extern template KernelRow<BigRational> kernel_split_uc<BigRational>(ClauseVector, int, int);
extern template KernelRow<double> kernel_split_guc<double>(ClauseVector, int, int,
                                                           GucDemotedClause);
extern template KernelRow<BigRational> kernel_split_guc<BigRational>(ClauseVector, int, int,
                                                                     GucDemotedClause);
extern template KernelRow<double> kernel_col<double>(ClauseVector, int, int, const double&);
extern template KernelRow<BigRational> kernel_col<BigRational>(ClauseVector, int, int,
                                                               const BigRational&);

}  // namespace dpllstat
