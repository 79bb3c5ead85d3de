#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nlflux/flux_law.hpp"
#include "nlflux/kernels.hpp"
#include "nlflux/self_similar.hpp"
#include "nlflux/trace_volterra.hpp"

namespace nlflux {

/// zeta(t, x) = amplitude (1 - t/T)^m (1 + c t/T) e^{-x^2 / sigma}.
struct TestFunction {
  double T = 1.0;
  double sigma = 1.0;
  int m = 2;
  double c = 0.0;
  double amplitude = 1.0;

  double theta(double t) const;
  double theta_prime(double t) const;
  double psi(double x) const { return std::exp(-x * x / sigma); }
  double psi_second(double x) const { return (4.0 * x * x / (sigma * sigma) - 2.0 / sigma) * psi(x); }

  static TestFunction random(double T, std::mt19937_64& rng);
};

struct WeakResidualTerms {
  double bulk = 0.0;      // -int int (zeta_t + zeta_xx) u
  double boundary = 0.0;  // int g(u(t, 0)) zeta(t, 0)
  double initial = 0.0;   // int zeta(0, x) dnu
  double flux = 0.0;      // int zeta(t, 0) dmu
  double residual = 0.0;  // |bulk + boundary - initial - flux| / largest term
};

struct WeakResidualOptions {
  int time_panels = 48;      // graded panels, 4 Gauss points each
  int space_points = 8;      // Gauss points per spatial panel
  double panel_width = 0.25; // uniform spatial panel width in units of sqrt(sigma_max)
};

/// Normalized residual of the weak formulation for each test function; the
/// reconstructed field is computed once and shared.
std::vector<WeakResidualTerms> weak_residuals(const TraceSolution& sol, const std::vector<TestFunction>& zetas,
                                              const WeakResidualOptions& opts = {});
WeakResidualTerms weak_residual(const TraceSolution& sol, const TestFunction& zeta,
                                const WeakResidualOptions& opts = {});

struct ContractionResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// ||u(t) - u~(t)||_{L^1} against ||nu - nu~||_TV + int_0^t |mu - mu~|.
ContractionResult contraction_check(const FluxLaw& law, const MeasureData& nu, const MeasureData& mu,
                                    const MeasureData& nu2, const MeasureData& mu2, double t,
                                    const GradedTimeGrid& grid, double slack = 1e-2);

struct MarcinkiewiczOptions {
  double T = 1.0;
  int time_cells = 400;
  int space_cells = 200;
};

struct MarcinkiewiczResult {
  double trace_weak2 = 0.0;
  double field_weak3 = 0.0;
  double total_variation = 0.0;
  double trace_ratio = 0.0;
  double field_ratio = 0.0;
};

/// Level-set quasinorms of the linear solution (q = 3 in space-time, q = 2 on
/// the boundary) sampled on cells with the smallest corner value.
MarcinkiewiczResult marcinkiewicz_check(const MeasureData& nu, const MeasureData& mu,
                                        const MarcinkiewiczOptions& opts = {});

/// Uniform bounds on quasinorm / total variation: 2/sqrt(pi) on the boundary and
/// 2^{2/3} (3/2) c^{1/3} in the quarter plane, c = |{E >= 1}|.
double trace_quasinorm_constant();
double field_quasinorm_constant();
/// |{(t, x) : E(t, x) >= 1}| on the full line.
double heat_ball_constant();

enum class Classification { Converging, Diverging, Unclassifiable };
const char* to_string(Classification c);

struct DichotomyReport {
  double p = 0.0;
  std::vector<double> ladder;
  std::vector<double> rescaled_trace;  // t^{1/(2(p-1))} u(t, 0) at t = 1
  std::vector<double> cauchy_ratios;   // NaN for the first two rungs
  bool monotone = false;
  Classification classification = Classification::Unclassifiable;
  double limit = NAN;                  // extrapolated (converging only)
  double last_growth = NAN;            // smallest ratio of successive values over the last three rungs
  double cauchy_threshold = 0.9;
  double growth_threshold = 1.5;
};

/// Solves u_{ell delta_0} for every rung (across `workers` threads) and classifies the ladder.
DichotomyReport dichotomy_sweep(double p, const std::vector<double>& ladder, const GradedTimeGrid& grid,
                                int workers = 1);

/// Pointwise relative error between T_k[u_{ell delta_0}] and u_{k^{(2-p)/(p-1)} ell delta_0}
/// at the nodes of the latter inside the range of the former.
double scaling_identity_check(double p, double ell, double k, const GradedTimeGrid& grid);

/// sup U_s(t, x) (x^2 + t)^{1/(2(p-1))} over the profile grid; reported only.
double apriori_shape_constant(const SelfSimilarProfile& profile);

}  // namespace nlflux
