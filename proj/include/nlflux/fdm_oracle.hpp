#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

#include "nlflux/flux_law.hpp"
#include "nlflux/trace_volterra.hpp"

namespace nlflux {

enum class TimeScheme { ImplicitEuler, CrankNicolson };

struct FdmConfig {
  double L = 12.0;  // truncation length (half-line) or ignored (interval)
  int nx = 1024;
  int nt = 1024;
  TimeScheme scheme = TimeScheme::CrankNicolson;
  /// Record a field snapshot every frame_stride steps (0: final time only).
  int frame_stride = 0;
};

struct FdmResult {
  Eigen::VectorXd times;  // nt + 1 levels
  Eigen::VectorXd trace;  // u(t_n, 0)
  Eigen::VectorXd trace_right;  // u(t_n, b) for interval runs, empty otherwise
  std::vector<FieldSnapshot> frames;
  /// max over steps of |mass change - dt * (boundary flux balance)|
  double mass_balance_residual = 0.0;
};

using Density = std::function<double(double)>;

/// Theta-scheme finite differences on [0, L] with a ghost-node flux condition
/// -u_x(t, 0) + g(u(t, 0)) = mu(t) and u(t, L) = 0.
FdmResult solve_fdm(const FluxLaw& law, const Density& nu, const Density& mu, double T, const FdmConfig& cfg);

/// Same scheme on [a, b] with -u_x(a) + g(u(a)) = mu_a and u_x(b) + g(u(b)) = mu_b.
FdmResult solve_fdm_interval(const FluxLaw& law, const Density& nu, const Density& mu_a, const Density& mu_b,
                             double a, double b, double T, const FdmConfig& cfg);

}  // namespace nlflux
