#include "dpllstat/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dpllstat {

double golden_max(const ScalarFn& f, double a, double b, double xtol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;  // 0.618...
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2;
}

ScanMaxResult scan_maximize(const ScalarFn& f, double a, double b, int grid_points,
                            double xtol) {
  if (grid_points < 2) throw std::invalid_argument("scan_maximize: need at least 2 grid points");
  ScanMaxResult res;
  res.grid_points = grid_points;
  const int n = grid_points;
  std::vector<double> xs(n + 1), fs(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = a + (b - a) * i / n;
    fs[i] = f(xs[i]);
  }
  // refine every (weak) local maximum of the grid, endpoints included
  for (int i = 0; i <= n; ++i) {
    const bool left_ok = i == 0 || fs[i] >= fs[i - 1];
    const bool right_ok = i == n || fs[i] >= fs[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double lo = xs[std::max(0, i - 1)];
    const double hi = xs[std::min(n, i + 1)];
    double x = lo < hi ? golden_max(f, lo, hi, xtol) : xs[i];
    res.local_maxima.emplace_back(x, f(x));
  }
  // endpoint values compete as-is
  res.local_maxima.emplace_back(a, fs[0]);
  res.local_maxima.emplace_back(b, fs[n]);
  std::sort(res.local_maxima.begin(), res.local_maxima.end(),
            [](const auto& u, const auto& v) { return u.second > v.second; });
  // collapse near-duplicates
  std::vector<std::pair<double, double>> dedup;
  for (const auto& m : res.local_maxima) {
    bool dup = false;
    for (const auto& d : dedup)
      if (std::abs(d.first - m.first) <= 2 * xtol + 1e-15) dup = true;
    if (!dup) dedup.push_back(m);
  }
  res.local_maxima = std::move(dedup);
  res.argmax = res.local_maxima.front().first;
  res.value = res.local_maxima.front().second;
  res.boundary = res.argmax <= a + xtol || res.argmax >= b - xtol;
  if (res.boundary) {
    // snap to the endpoint so boundary maxima are exact
    const double xe = res.argmax < (a + b) / 2 ? a : b;
    const double fe = xe == a ? fs[0] : fs[n];
    if (fe >= res.value - 1e-15 * (1 + std::abs(res.value))) {
      res.argmax = xe;
      res.value = fe;
    }
  }
  return res;
}

double bisect_root(const ScalarFn& f, double a, double b, double xtol) {
  double fa = f(a), fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if ((fa > 0) == (fb > 0)) throw std::invalid_argument("bisect_root: no sign change");
  while (b - a > xtol) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return 0.5 * (a + b);
}

double find_root_expanding(const ScalarFn& f, double a, double b, double xtol,
                           int max_expansions) {
  double fa = f(a), fb = f(b);
  const double a0 = a, b0 = b;
  for (int i = 0; i < max_expansions; ++i) {
    if (fa == 0) return a;
    if (fb == 0) return b;
    if ((fa > 0) != (fb > 0)) return bisect_root(f, a, b, xtol);
    const double width = b - a;
    a = std::max(1e-12, a - width / 2);
    b = b + width;
    fa = f(a);
    fb = f(b);
  }
  throw std::runtime_error("find_root_expanding: no sign change found after expanding [" +
                           std::to_string(a0) + ", " + std::to_string(b0) + "] to [" +
                           std::to_string(a) + ", " + std::to_string(b) + "]");
}

namespace {

// Dormand-Prince coefficients
constexpr double kC[7] = {0, 1. / 5, 3. / 10, 4. / 5, 8. / 9, 1., 1.};
constexpr double kA[7][6] = {
    {},
    {1. / 5},
    {3. / 40, 9. / 40},
    {44. / 45, -56. / 15, 32. / 9},
    {19372. / 6561, -25360. / 2187, 64448. / 6561, -212. / 729},
    {9017. / 3168, -355. / 33, 46732. / 5247, 49. / 176, -5103. / 18656},
    {35. / 384, 0., 500. / 1113, 125. / 192, -2187. / 6784, 11. / 84},
};
constexpr double kB5[7] = {35. / 384, 0., 500. / 1113, 125. / 192, -2187. / 6784, 11. / 84, 0.};
constexpr double kB4[7] = {5179. / 57600,    0.,           7571. / 16695, 393. / 640,
                           -92097. / 339200, 187. / 2100, 1. / 40};

}  // namespace

OdeSolution integrate_adaptive(const OdeRhs& rhs, double x0, double x1, std::vector<double> y0,
                               double rtol, double atol) {
  const int dim = static_cast<int>(y0.size());
  const double dir = x1 >= x0 ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);
  if (span == 0) throw std::invalid_argument("integrate_adaptive: empty interval");

  OdeSolution sol;
  std::vector<std::vector<double>> k(7, std::vector<double>(dim));
  std::vector<double> y = y0, ytmp(dim), y5(dim), y4(dim), f0(dim);

  rhs(x0, y, f0);
  sol.xs.push_back(x0);
  sol.ys.push_back(y);
  sol.derivs.push_back(f0);

  double x = x0;
  double h = dir * std::min(span / 16, 0.1);
  const double hmin = span * 1e-15;
  int rejects_in_row = 0;

  while (dir * (x1 - x) > 0) {
    if (dir * (x + h - x1) > 0) h = x1 - x;
    k[0] = sol.derivs.back();
    for (int s = 1; s < 7; ++s) {
      for (int d = 0; d < dim; ++d) {
        double acc = y[d];
        for (int j = 0; j < s; ++j) acc += h * kA[s][j] * k[j][d];
        ytmp[d] = acc;
      }
      rhs(x + kC[s] * h, ytmp, k[s]);
    }
    double err = 0.0;
    for (int d = 0; d < dim; ++d) {
      double a5 = y[d], a4 = y[d];
      for (int s = 0; s < 7; ++s) {
        a5 += h * kB5[s] * k[s][d];
        a4 += h * kB4[s] * k[s][d];
      }
      y5[d] = a5;
      y4[d] = a4;
      const double scale = atol + rtol * std::max(std::abs(y[d]), std::abs(a5));
      err = std::max(err, std::abs(a5 - a4) / scale);
    }
    if (err <= 1.0) {
      x += h;
      y = y5;
      sol.xs.push_back(x);
      sol.ys.push_back(y);
      sol.derivs.push_back(k[6]);  // FSAL: stage 7 is the RHS at the new point
      sol.max_local_error = std::max(sol.max_local_error, err);
      rejects_in_row = 0;
    } else if (++rejects_in_row > 200) {
      throw std::runtime_error("integrate_adaptive: step-size underflow near x = " +
                               std::to_string(x) + " (reachable domain ends here)");
    }
    const double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.1, 5.0);
    if (std::abs(h) < hmin)
      throw std::runtime_error("integrate_adaptive: step-size underflow near x = " +
                               std::to_string(x) + " (reachable domain ends here)");
  }

  if (dir < 0) {
    std::reverse(sol.xs.begin(), sol.xs.end());
    std::reverse(sol.ys.begin(), sol.ys.end());
    std::reverse(sol.derivs.begin(), sol.derivs.end());
  }
  return sol;
}

namespace {

int locate(const std::vector<double>& xs, double x) {
  if (x <= xs.front()) return 0;
  if (x >= xs.back()) return static_cast<int>(xs.size()) - 2;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  return static_cast<int>(it - xs.begin()) - 1;
}

}  // namespace

double OdeSolution::eval(double x, int component) const {
  const int i = locate(xs, x);
  const double h = xs[i + 1] - xs[i];
  const double s = (x - xs[i]) / h;
  const double y0 = ys[i][component], y1 = ys[i + 1][component];
  const double d0 = derivs[i][component] * h, d1 = derivs[i + 1][component] * h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * d1;
}

std::vector<double> OdeSolution::eval(double x) const {
  std::vector<double> out(ys.front().size());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = eval(x, static_cast<int>(d));
  return out;
}

}  // namespace dpllstat
