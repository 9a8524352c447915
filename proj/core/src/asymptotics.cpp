#include "dpllstat/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace dpllstat {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double log2_checked(double x, const char* who) {
  if (!(x > 0)) throw std::domain_error(std::string(who) + ": log argument not positive");
  return std::log2(x);
}

}  // namespace

double big_omega(double t, double alpha, int k) {
  if (k < 3) throw std::invalid_argument("big_omega: k >= 3 required");
  if (t < 0 || t > 1) throw std::invalid_argument("big_omega: t in [0,1] required");
  if (alpha < 0) throw std::invalid_argument("big_omega: alpha >= 0 required");
  const double pk = std::pow(2.0, -k);
  const double g = 1.0 - k * pk * std::pow(t, k - 1) + (k - 1) * pk * std::pow(t, k);
  return t + alpha * log2_checked(g, "big_omega");
}

double gamma_uc(double x2, double x3, double t) {
  const double u = 1.0 - t;
  return u * u * u * x3 + 1.5 * t * u * u * x2 + t / 8.0 * (12.0 - 3.0 * t - 2.0 * t * t);
}

double omega_s(double alpha, int k) { return big_omega(1.0, alpha, k); }

OmegaResult omega_c(double alpha, int k, int grid_points, double xtol) {
  auto f = [&](double t) { return big_omega(t, alpha, k); };
  ScanMaxResult scan = scan_maximize(f, 0.0, 1.0, grid_points, xtol);
  OmegaResult res;
  res.value = scan.value;
  res.argmax = scan.argmax;
  res.boundary = scan.boundary;
  res.grid_points = grid_points;
  res.refine_tol = xtol;
  res.local_maxima = std::move(scan.local_maxima);
  return res;
}

double alpha_star(int k) {
  // Value of the best interior local maximum, or -inf when none exists.
  auto interior_best = [&](double alpha) {
    auto f = [&](double t) { return big_omega(t, alpha, k); };
    ScanMaxResult scan = scan_maximize(f, 0.0, 1.0, 4000, 1e-12);
    double best = -HUGE_VAL;
    for (const auto& [x, v] : scan.local_maxima)
      if (x > 1e-9 && x < 1.0 - 1e-3) best = std::max(best, v);
    return best;
  };
  auto gap = [&](double alpha) {
    const double ib = interior_best(alpha);
    const double boundary = big_omega(1.0, alpha, k);
    return ib == -HUGE_VAL ? -1.0 : ib - boundary;
  };
  return find_root_expanding(gap, 3.5, 20.0, 1e-9);
}

double alpha_u(int k) {
  const double slope = std::log2(1.0 - std::pow(2.0, -k));
  auto f = [&](double alpha) { return omega_c(alpha, k).value - 2.0 - alpha * slope; };
  return find_root_expanding(f, 5.0, 20.0, 1e-9);
}

double omega_c_asym(double alpha, int k) {
  if (alpha <= 0) throw std::invalid_argument("omega_c_asym: alpha > 0 required");
  const double base = std::pow(2.0, k) * kLn2 / (k * (k - 1) * alpha);
  return (k - 2.0) / (k - 1.0) * std::pow(base, 1.0 / (k - 2.0));
}

double omega_guc_asym(double alpha) {
  if (alpha <= 0) throw std::invalid_argument("omega_guc_asym: alpha > 0 required");
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double lnphi = std::log(phi);
  return (3.0 + std::sqrt(5.0)) / (6.0 * kLn2) * lnphi * lnphi / alpha;
}

double omega_col_asym(double c, int k) {
  if (c <= 0) throw std::invalid_argument("omega_col_asym: c > 0 required");
  const double base = 2.0 * kLn2 / (k - 1.0);
  return k * (k - 2.0) / (k - 1.0) * std::pow(base, 1.0 / (k - 2.0)) *
         std::pow(c, -(k - 1.0) / (k - 2.0));
}

double m_guc(double x2) {
  if (x2 < -0.25) throw std::invalid_argument("m_guc: x2 >= -1/4 required");
  return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * x2)) - 2.0 * x2;
}

namespace {

// |m| on (3/4, 1], where m < 0.
double q_guc(double z) { return -m_guc(z); }

// Pinned first-coordinate argument: x1 (1 + x1) = x2.
double x1_pinned(double x2) { return 0.5 * (std::sqrt(1.0 + 4.0 * x2) - 1.0); }

}  // namespace

OdeSolution y3_solve(double z_min, double rtol) {
  if (z_min <= 0.75 || z_min >= 1.0)
    throw std::invalid_argument("y3_solve: z_min must lie in (3/4, 1)");
  OdeRhs rhs = [](double z, const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = 3.0 * (1.0 + z - 2.0 * y[0]) / (2.0 * m_guc(z));
  };
  return integrate_adaptive(rhs, 1.0, z_min, {1.0}, rtol, 1e-14);
}

GucAsymptotics::GucAsymptotics(double delta, double rtol) : z_min_(0.75 + delta) {
  if (delta <= 0 || delta >= 0.25)
    throw std::invalid_argument("GucAsymptotics: delta must lie in (0, 1/4)");
  // Backward sweep of y3, Lambda(z) = int_z^1 dv/q and the branching
  // integral int_z^1 (-log2 x1(v)) e^Lambda / q dv. Lambda stays below
  // ~(2/3) log(1/delta), so the linear-space weight cannot overflow.
  OdeRhs rhs = [](double z, const std::vector<double>& y, std::vector<double>& dy) {
    const double q = q_guc(z);
    dy[0] = -3.0 * (1.0 + z - 2.0 * y[0]) / (2.0 * q);
    dy[1] = -1.0 / q;
    dy[2] = std::log2(x1_pinned(z)) * std::exp(y[1]) / q;
  };
  traj_ = integrate_adaptive(rhs, 1.0, z_min_, {1.0, 0.0, 0.0}, rtol, 1e-14);
}

double GucAsymptotics::y3(double y2) const { return traj_.eval(y2, 0); }

double GucAsymptotics::reduced_height(double y2) const {
  return 1.0 - std::exp(-traj_.eval(y2, 1));
}

double GucAsymptotics::branch_rate_term(double y2) const {
  // W(y2) = e^{-Lambda(y2)} * int_{y2}^1 (-log2 x1) e^Lambda / q; the stored
  // integral is anchored at z = 1, so the weight difference is taken in
  // log space and never exceeds 1.
  const double lam = traj_.eval(y2, 1);
  return traj_.eval(y2, 2) * std::exp(-lam);
}

double GucAsymptotics::objective(double y2, double alpha) const {
  if (y2 >= 1.0) return 0.0;
  return branch_rate_term(y2) + alpha * std::log2(y3(y2));
}

OmegaResult GucAsymptotics::omega(double alpha, int grid_points, double xtol) const {
  auto f = [&](double y2) { return objective(y2, alpha); };
  ScanMaxResult scan = scan_maximize(f, z_min_, 1.0, grid_points, xtol);
  OmegaResult res;
  res.value = scan.value;
  res.argmax = scan.argmax;
  res.boundary = scan.boundary;
  res.grid_points = grid_points;
  res.refine_tol = xtol;
  res.local_maxima = std::move(scan.local_maxima);
  return res;
}

namespace {

const GucAsymptotics& shared_guc() {
  static const GucAsymptotics cache;
  return cache;
}

}  // namespace

OmegaResult omega_guc(double alpha) {
  if (alpha <= 0) throw std::invalid_argument("omega_guc: alpha > 0 required");
  return shared_guc().omega(alpha);
}

double alpha_u_guc() {
  const double slope = std::log2(8.0 / 7.0);
  auto f = [&](double alpha) { return omega_guc(alpha).value + alpha * slope - 2.0; };
  return find_root_expanding(f, 5.0, 20.0, 1e-9);
}

double gamma_h(double x2, double x3, double t, double c) {
  if (x2 <= 0 || x3 <= 0) throw std::domain_error("gamma_h: x2, x3 must be positive");
  if (c < 0) throw std::invalid_argument("gamma_h: c >= 0 required");
  const double bracket = 3.0 + std::exp(-2.0 * c * t / 3.0) * (2.0 * x3 / x2 - 3.0);
  if (!(bracket > 0)) throw std::domain_error("gamma_h: log argument not positive");
  return c / 6.0 * t * t - c / 3.0 * t + (1.0 - t) * std::log(x2 / 2.0) + std::log(bracket);
}

OmegaResult omega_col(double c, int grid_points, double xtol) {
  if (c < 0) throw std::invalid_argument("omega_col: c >= 0 required");
  auto f = [&](double t) { return gamma_h(1.0, 1.0, t, c); };
  ScanMaxResult scan = scan_maximize(f, 0.0, 1.0, grid_points, xtol);
  OmegaResult res;
  res.value = scan.value;
  res.argmax = scan.argmax;
  res.boundary = scan.boundary;
  res.grid_points = grid_points;
  res.refine_tol = xtol;
  res.local_maxima = std::move(scan.local_maxima);
  return res;
}

double c_u_col() {
  const double target = 2.0 * std::log(3.0);
  auto f = [&](double c) { return omega_col(c).value + c / 6.0 - target; };
  return find_root_expanding(f, 5.0, 30.0, 1e-9);
}

}  // namespace dpllstat
