#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nlflux/error.hpp"
#include "nlflux/numerics.hpp"

namespace nlflux {

/// Gaussian heat kernel (4 pi t)^{-1/2} exp(-x^2 / 4t).
template <typename Scalar>
Scalar heat_kernel(Scalar t, Scalar x) {
  using std::exp;
  using std::sqrt;
  require(t > Scalar(0), "heat_kernel: t must be positive");
  return exp(-x * x / (Scalar(4) * t)) / sqrt(Scalar(4) * Scalar(kPi) * t);
}

/// Neumann kernel of the half-line: E(dt, x - y) + E(dt, x + y).
template <typename Scalar>
Scalar mirrored_kernel(Scalar dt, Scalar x, Scalar y) {
  require(dt > Scalar(0), "mirrored_kernel: dt must be positive");
  return heat_kernel(dt, x - y) + heat_kernel(dt, x + y);
}

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// Piecewise-linear density, zero outside [nodes.front(), nodes.back()].
struct PiecewiseLinear {
  Eigen::VectorXd nodes;
  Eigen::VectorXd values;

  double operator()(double s) const;
  double integral() const;
  double integral_abs() const;
  /// Sample f on a uniform grid of n nodes over [a, b].
  template <typename F>
  static PiecewiseLinear sample(F&& f, double a, double b, int n) {
    PiecewiseLinear pl{Eigen::VectorXd::LinSpaced(n, a, b), Eigen::VectorXd(n)};
    for (int i = 0; i < n; ++i) pl.values[i] = f(pl.nodes[i]);
    return pl;
  }
};

enum class MeasureDomain { Initial, Boundary };

/// Radon measure given as finitely many atoms plus a piecewise-linear density.
/// Initial measures live on [0, inf); boundary measures on [0, horizon).
struct MeasureData {
  MeasureDomain domain = MeasureDomain::Initial;
  std::vector<Atom> atoms;
  std::optional<PiecewiseLinear> density;
  double horizon = INFINITY;

  static MeasureData initial(std::vector<Atom> atoms = {}, std::optional<PiecewiseLinear> density = {});
  static MeasureData boundary(double horizon, std::vector<Atom> atoms = {},
                              std::optional<PiecewiseLinear> density = {});
  static MeasureData dirac_at_origin(double horizon, double mass);

  void validate() const;
  bool empty() const { return atoms.empty() && !density; }
  double total_variation() const;
  double atom_mass_at_origin() const;
  double density_at(double s) const { return density ? (*density)(s) : 0.0; }
  bool has_atoms() const { return !atoms.empty(); }
};

/// Total variation of the difference of two measures (atoms matched by
/// location, densities compared on the merged node set).
double difference_total_variation(const MeasureData& a, const MeasureData& b, double upto = INFINITY);

/// Moments of the heat kernel in the backward variable:
/// m0 = int_{s0}^{s1} E(t - s, d) ds, m1 = int_{s0}^{s1} E(t - s, d) (s - s0) ds,
/// for s0 < s1 <= t. Closed form (erfc) for d != 0, cancellation-free Abel
/// moments for d == 0.
struct KernelMoments {
  double m0 = 0.0;
  double m1 = 0.0;
};
KernelMoments heat_kernel_moments(double t, double s0, double s1, double d);

/// int E(t, y - c) dnu(y) over the support of nu.
double gaussian_integral(const MeasureData& nu, double t, double c);
/// int_0^t E(t - s, d) dmu(s); atoms at s >= t are ignored.
double boundary_kernel_integral(const MeasureData& mu, double t, double d);
/// int_0^inf Etilde(t, x, y) dnu(y).
double initial_part(const MeasureData& nu, double t, double x);
/// 2 int_0^t E(t - s, x) dmu(s).
double boundary_part(const MeasureData& mu, double t, double x);
/// Solution of the linear Neumann problem with initial data nu and boundary
/// flux mu, evaluated at (t, x).
double linear_solution(const MeasureData& nu, const MeasureData& mu, double t, double x);

struct HeatBallQuery {
  double t = 1.0;
  double x = 0.0;
  double r = 1.0;
  std::int64_t samples = 1000000;
  std::uint64_t seed = 0;
};

struct HeatBallEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double sampling_area = 0.0;
  /// Portion of the estimate lying outside [t - 1/(4 pi e r^2), t] x
  /// [x - 1/(r sqrt(pi e)), x + 1/(r sqrt(pi e))].
  double outside_reference_box = 0.0;
  std::uint64_t seed = 0;
};

/// Monte Carlo measure of {(s, y) : 0 < s <= t, y >= 0, Etilde(t - s, x, y) >= r}.
/// Samples a box that provably contains the set.
HeatBallEstimate heat_ball_measure(const HeatBallQuery& q);

/// Monte Carlo measure of {s in (0, t] : E(t - s, 0) >= r}.
HeatBallEstimate boundary_heat_ball_measure(const HeatBallQuery& q);

/// Reference bounds 1 / (2 r^3 (pi e)^{3/2}) and 1 / (4 r^2 pi e).
double heat_ball_reference_bound(double r);
double boundary_heat_ball_reference_bound(double r);

/// Level-set weak-L^q quasinorm sup_lambda lambda |{|f| > lambda}|^{1/q} of a
/// sampled function given as (weight, |f|) pairs. Levels are taken at every
/// sampled value, counting samples with |f| >= level.
double weak_norm(std::span<const std::pair<double, double>> samples, double q);

}  // namespace nlflux
