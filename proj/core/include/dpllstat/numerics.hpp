// Scalar optimization, root finding and ODE integration helpers.

#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace dpllstat {

using ScalarFn = std::function<double(double)>;

// Golden-section maximization on [a,b]; assumes unimodality on the bracket.
// Returns the abscissa of the maximum to within xtol.
double golden_max(const ScalarFn& f, double a, double b, double xtol);

struct ScanMaxResult {
  double argmax = 0.0;
  double value = 0.0;
  bool boundary = false;  // maximum attained at an endpoint of [a,b]
  int grid_points = 0;
  // refined local maxima (x, f(x)), best first
  std::vector<std::pair<double, double>> local_maxima;
};

// Dense grid scan plus golden-section refinement of every local maximum.
// Does not assume unimodality; endpoint values compete as candidates.
ScanMaxResult scan_maximize(const ScalarFn& f, double a, double b, int grid_points,
                            double xtol);

// Bisection on a sign change; f(a) and f(b) must have opposite signs.
double bisect_root(const ScalarFn& f, double a, double b, double xtol);

// Expands [a,b] geometrically until it brackets a sign change, then bisects.
// Throws std::runtime_error (reporting the scanned interval) on failure.
double find_root_expanding(const ScalarFn& f, double a, double b, double xtol,
                           int max_expansions = 60);

// Adaptive Dormand-Prince 5(4) with dense output (cubic Hermite between
// accepted steps). Integrates from x0 to x1 (either direction).
struct OdeSolution {
  std::vector<double> xs;                   // ascending
  std::vector<std::vector<double>> ys;      // ys[i] = state at xs[i]
  std::vector<std::vector<double>> derivs;  // RHS at xs[i]
  double max_local_error = 0.0;             // largest accepted per-step error estimate

  double eval(double x, int component) const;
  std::vector<double> eval(double x) const;
  double x_min() const { return xs.front(); }
  double x_max() const { return xs.back(); }
};

using OdeRhs = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;

OdeSolution integrate_adaptive(const OdeRhs& rhs, double x0, double x1,
                               std::vector<double> y0, double rtol, double atol);

}  // namespace dpllstat
