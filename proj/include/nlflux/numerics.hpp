#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "nlflux/error.hpp"

namespace nlflux {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrtPi = 1.7724538509055160273;

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

const GaussRule& gauss_legendre(int n);

/// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <typename F>
double gauss_integrate(F&& f, double a, double b, int n = 8) {
  const GaussRule& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod (7/15) bisection. Stops when the estimated error is
/// below max(abs_tol, rel_tol * |value|) on every accepted panel.
QuadratureResult adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                                        double abs_tol, double rel_tol = 1e-12, int max_panels = 20000);

/// Monotonicity-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson).
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(Eigen::VectorXd xs, Eigen::VectorXd ys);

  double operator()(double x) const;
  double front() const { return xs_[0]; }
  double back() const { return xs_[xs_.size() - 1]; }

 private:
  Eigen::VectorXd xs_;
  Eigen::VectorXd ys_;
  Eigen::VectorXd slopes_;
};

/// Linear interpolation on sorted abscissae, clamped at the ends.
double interp_linear(const Eigen::Ref<const Eigen::VectorXd>& xs, const Eigen::Ref<const Eigen::VectorXd>& ys,
                     double x);

/// Solve f(x) = 0 for increasing f on [lo, hi] with safeguarded Newton.
/// f_and_df returns (f, f'). Requires f(lo) <= 0 <= f(hi).
double safeguarded_newton(const std::function<std::pair<double, double>(double)>& f_and_df, double lo,
                          double hi, double tol, int max_iter = 200);

/// Solve a tridiagonal system in place (Thomas algorithm). lower[0] and
/// upper[n-1] are ignored.
void solve_tridiagonal(const Eigen::Ref<const Eigen::VectorXd>& lower, const Eigen::Ref<const Eigen::VectorXd>& diag,
                       const Eigen::Ref<const Eigen::VectorXd>& upper, Eigen::Ref<Eigen::VectorXd> rhs);

/// Least-squares slope of log|y| against log x.
double loglog_slope(std::span<const double> xs, std::span<const double> ys);

/// Dormand-Prince 5(4) integration of a 2-vector ODE from x0 to x1 (either
/// direction). Throws IntegrationFailure when the step size collapses.
template <typename Rhs>
Eigen::Vector2d integrate_dopri5(Rhs&& rhs, Eigen::Vector2d y, double x0, double x1, double rtol,
                                 double atol, double h_init = 0.0) {
  using V = Eigen::Vector2d;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = x1 - x0;
  if (span == 0.0) return y;
  const double dir = span > 0 ? 1.0 : -1.0;
  double h = h_init > 0 ? dir * h_init : dir * std::min(std::abs(span), 1e-2);
  double x = x0;
  V k1 = rhs(x, y);
  int steps = 0;
  while (dir * (x1 - x) > 0) {
    const bool last = dir * (x + h - x1) >= -1e-12 * std::abs(span);
    if (last) h = x1 - x;
    const V k2 = rhs(x + c2 * h, y + h * a21 * k1);
    const V k3 = rhs(x + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const V k4 = rhs(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const V k5 = rhs(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const V k6 = rhs(x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const V y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const V k7 = rhs(x + h, y_new);
    const V err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double norm = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      norm = std::max(norm, std::abs(err[i]) / sc);
    }
    if (norm <= 1.0) {
      x = last ? x1 : x + h;
      y = y_new;
      k1 = k7;
      const double fac = norm == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(norm, -0.2)));
      h *= fac;
    } else {
      h *= std::max(0.1, 0.9 * std::pow(norm, -0.25));
    }
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(x)) || ++steps > 1000000)
      throw Error(ErrorKind::IntegrationFailure, "dopri5 step size collapsed");
  }
  return y;
}

}  // namespace nlflux
