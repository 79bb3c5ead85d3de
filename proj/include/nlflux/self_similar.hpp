#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>

#include "nlflux/numerics.hpp"

namespace nlflux {

/// Parameters of the Whittaker normal form in r = eta^2 / 4.
struct WhittakerParams {
  double p = 0.0;
  double k = 0.0;  // 1/(2(p-1)) - 1/4
  double mu = 0.25;

  static WhittakerParams from_exponent(double p);
  static double r(double eta) { return 0.25 * eta * eta; }
  /// Exponent of the decaying branch, omega_1 ~ eta^{nu} e^{-eta^2/4}.
  double decay_exponent() const { return 2.0 * (k - mu - 0.5) + 1.0; }
};

/// Solution of omega'' + (eta/2) omega' + omega / (2(p-1)) = 0 on a uniform eta grid.
/// omega holds c * omega_1 when the matching constant exists and omega_1 otherwise.
struct SelfSimilarProfile {
  double p = 0.0;
  Eigen::VectorXd eta;
  Eigen::VectorXd omega;
  Eigen::VectorXd omega_prime;
  Eigen::VectorXd omega1;  // decaying solution, omega_1 e^{eta^2/4} eta^{-nu} -> 1 at infinity
  Eigen::VectorXd omega1_prime;
  bool exists = false;
  std::optional<double> c;
  double rho = 0.0;  // omega_1'(0) / |omega_1(0)|^{p-1} omega_1(0)
  std::string reason;
  double eta_inf = 0.0;
  int seed_terms = 0;  // asymptotic series terms used at eta_inf
  MonotoneCubic interp;

  double operator()(double eta) const { return interp(eta); }
};

struct ProfileOptions {
  double eta_inf = 14.0;
  double rtol = 1e-12;
  double step = 0.01;  // output grid spacing
};

/// Decaying solution by backward integration from eta_inf, seeded with the
/// asymptotic expansion eta^nu sum_k c_k eta^{-2k}.
SelfSimilarProfile decaying_profile(double p, const ProfileOptions& opts = {});

/// Matching constant c with (c omega_1)'(0) = (c omega_1(0))^p. Returns a profile
/// with exists = false and a reason when no positive solution exists; throws
/// Inconclusive when omega_1(0) vanishes.
SelfSimilarProfile profile_constant(double p, const ProfileOptions& opts = {});

struct EnvelopeRatios {
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

/// Extremes of e^{eta^2/4} omega(eta) / eta^{1/(p-1) - 1} over grid nodes in [eta_lo, eta_hi].
EnvelopeRatios envelope_check(const SelfSimilarProfile& profile, double eta_lo, double eta_hi);

/// t^{-1/(2(p-1))} omega_s(x / sqrt(t)).
double self_similar_solution(const SelfSimilarProfile& profile, double t, double x);

}  // namespace nlflux
