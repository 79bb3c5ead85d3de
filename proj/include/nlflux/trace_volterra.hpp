#pragma once

#include <Eigen/Core>

#include <optional>
#include <utility>
#include <vector>

#include "nlflux/flux_law.hpp"
#include "nlflux/kernels.hpp"

namespace nlflux {

/// Time grid t_j = T (j/N)^gamma, j = 0..N. Optionally the head of the grid is
/// replaced by geometric cells t_min q^k (q close to 1) so that thin boundary
/// layers near t = 0 are resolved with bounded cell ratios.
class GradedTimeGrid {
 public:
  GradedTimeGrid(double T, int N, double gamma = 2.0);
  /// Graded grid whose nodes below the point where successive ratios drop to
  /// `ratio` are replaced by a geometric sequence starting at t_min.
  static GradedTimeGrid with_geometric_head(double T, int N, double gamma, double t_min, double ratio = 1.05);

  double horizon() const { return T_; }
  /// Number of cells (N unless a geometric head was added).
  int steps() const { return static_cast<int>(nodes_.size()) - 1; }
  double gamma() const { return gamma_; }
  double t_min() const { return t_min_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  double operator[](int j) const { return nodes_[j]; }
  /// The same grid for horizon T / k^2.
  GradedTimeGrid rescaled(double k) const;
  /// Index of the node nearest to s.
  int nearest_node(double s) const;

 private:
  GradedTimeGrid() = default;

  double T_ = 0.0;
  double gamma_ = 1.0;
  double t_min_ = 0.0;
  Eigen::VectorXd nodes_;
};

/// Start of a geometric grid head for a point mass at the origin: the largest t
/// with mass^{q-1} t^{(2-q)/2} <= tol, where q is the growth exponent of the
/// law, so that the first cell lies inside the linear regime. Clamped to
/// [1e-300, 1e-6].
double resolving_t_min(const FluxLaw& law, double mass, double tol = 1e-3);

/// Boundary trace U(t_j) = u(t_j, 0) with g(U) and the linear forcing.
struct TraceSolution {
  GradedTimeGrid grid;
  FluxLaw law;
  MeasureData nu;
  MeasureData mu;  // with interior atoms moved onto grid nodes
  Eigen::VectorXd U;        // U[0] is the t -> 0 limit for regular data, NaN otherwise
  Eigen::VectorXd gU;
  Eigen::VectorXd forcing;  // forcing[0] unused
  /// Cell j = [t_{j-1}, t_j] is singular when g(U) blows up at its left end;
  /// there g(U(s)) is modelled as gU[j] (h_j / (s - t_{j-1}))^beta.
  std::vector<bool> singular_cell;
  double beta = 0.5;
  double snap_distance = 0.0;
  /// Set for traces of the interval problem; such traces cannot be extended
  /// into the half-line field.
  std::optional<std::pair<double, double>> interval;

  /// Monotone cubic interpolation of the trace at t in [t_1, T].
  double at(double t) const;
};

struct FieldSnapshot {
  double t = 0.0;
  Eigen::VectorXd xs;
  Eigen::VectorXd u;
};

/// Solve U(t) = v(t, 0) - pi^{-1/2} int_0^t (t - s)^{-1/2} g(U(s)) ds by product
/// integration on the graded grid.
TraceSolution solve_trace(const FluxLaw& law, const MeasureData& nu, const MeasureData& mu,
                          const GradedTimeGrid& grid);

/// u(t, x) = v(t, x) - 2 int_0^t E(t - s, x) g(U(s)) ds for each x in xs.
FieldSnapshot reconstruct_field(const TraceSolution& sol, double t, const Eigen::VectorXd& xs);

/// 2 int_0^t E(t - s, x) g(U(s)) ds for the piecewise model of g(U) in sol.
double flux_potential(const TraceSolution& sol, double t, double x);

/// Trace of T_k[u](t, x) = k^{1/(p-1)} u(k^2 t, k x) on the grid with horizon T / k^2,
/// together with the transformed data.
TraceSolution scale_solution(const TraceSolution& sol, double k);

/// Interval problem on (a, b): -u_x(a) + g(u(a)) = mu_a, u_x(b) + g(u(b)) = mu_b.
struct IntervalTraces {
  TraceSolution at_a;
  TraceSolution at_b;
  double tail_bound = 0.0;
};

IntervalTraces solve_interval_trace(const FluxLaw& law, const MeasureData& nu, const MeasureData& mu_a,
                                    const MeasureData& mu_b, double a, double b, const GradedTimeGrid& grid,
                                    int images);

/// Bound on the interval kernel terms dropped beyond the given image count.
double image_tail_bound(double length, double T, int images);

}  // namespace nlflux
