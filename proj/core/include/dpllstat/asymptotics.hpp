// Search-tree growth rates and threshold constants for random k-SAT under
// the UC and GUC branching rules and for 3-COL.
//
// SAT rates are base-2 logarithms per variable (tree size 2^(N w)); COL
// rates are natural logarithms per vertex (tree size e^(N w)). The reference
// asymptotic formulas (omega_*_asym) are expressed on the base-2 scale
// throughout; divide by ln 2 to convert a COL rate to that scale.

#pragma once

#include "dpllstat/numerics.hpp"

namespace dpllstat {

struct OmegaResult {
  double value = 0.0;   // growth rate
  double argmax = 0.0;  // maximizing reduced height t (or y2 for GUC)
  bool boundary = false;
  int grid_points = 0;
  double refine_tol = 0.0;
  std::vector<std::pair<double, double>> local_maxima;
};

// Rate of branches carrying clause vectors at reduced height t.
double big_omega(double t, double alpha, int k);

// Flow value gamma(x2,x3,t) whose log gives the UC branch rate;
// big_omega(t,a,3) == t + a*log2(gamma_uc(1,1,t)).
double gamma_uc(double x2, double x3, double t);

double omega_s(double alpha, int k);                 // solution-leaf rate
OmegaResult omega_c(double alpha, int k, int grid_points = 10000, double xtol = 1e-10);

// Ratio above which the maximizer of big_omega leaves the boundary t = 1,
// i.e. where the interior local maximum first matches the boundary value.
double alpha_star(int k);
// Root of omega_c(a,k) == 2 + a*log2(1 - 2^-k).
double alpha_u(int k);

// Large-parameter reference curves (base-2 scale).
double omega_c_asym(double alpha, int k);
double omega_guc_asym(double alpha);
double omega_col_asym(double c, int k);

// m(x2) = (1 + sqrt(1+4 x2))/2 - 2 x2; negative on (3/4, 1].
double m_guc(double x2);

// y3(y2) along dy3/dy2 = 3(1 + y2 - 2 y3) / (2 m(y2)), y3(1) = 1, solved
// backward from y2 = 1 to z_min (default stops short of the m = 0 point).
OdeSolution y3_solve(double z_min = 0.75 + 1e-6, double rtol = 1e-12);

// Cached GUC trajectory: y3, the time-change integral Lambda(z) = int_z^1
// dv/|m(v)| and the weighted branching integral, from which the GUC tree
// rate is a cheap scan in y2.
class GucAsymptotics {
 public:
  explicit GucAsymptotics(double delta = 1e-6, double rtol = 1e-12);

  double y3(double y2) const;
  double reduced_height(double y2) const;    // t(y2) = 1 - exp(-Lambda(y2))
  double branch_rate_term(double y2) const;  // the alpha-independent integral
  double objective(double y2, double alpha) const;
  OmegaResult omega(double alpha, int grid_points = 4000, double xtol = 1e-12) const;

  const OdeSolution& trajectory() const { return traj_; }

 private:
  double z_min_;
  OdeSolution traj_;  // components: 0 = y3, 1 = Lambda, 2 = weighted integral
};

OmegaResult omega_guc(double alpha);
double alpha_u_guc();  // root of omega_guc(a) + a*log2(8/7) == 2

// COL branch rate at reduced height t with generating-function arguments
// (x2, x3); omega_col maximizes gamma_h(1,1,t,c) over t in (0,1). Natural
// logarithms.
double gamma_h(double x2, double x3, double t, double c);
OmegaResult omega_col(double c, int grid_points = 10000, double xtol = 1e-10);
double c_u_col();  // root of omega_col(c) + c/6 == 2 ln 3

}  // namespace dpllstat
