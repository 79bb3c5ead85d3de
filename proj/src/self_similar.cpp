#include "nlflux/self_similar.hpp"

#include <algorithm>
#include <cmath>

#include "nlflux/error.hpp"

namespace nlflux {

WhittakerParams WhittakerParams::from_exponent(double p) {
  require(p > 1, "WhittakerParams: p must exceed 1");
  return {p, 1.0 / (2.0 * (p - 1.0)) - 0.25, 0.25};
}

SelfSimilarProfile decaying_profile(double p, const ProfileOptions& opts) {
  require(p > 1 && p < 3, "decaying_profile: p must lie in (1, 3)");
  require(opts.eta_inf >= 10, "decaying_profile: eta_inf must be at least 10");
  require(opts.rtol > 0 && opts.step > 0, "decaying_profile: rtol and step must be positive");
  const double a = 1.0 / (2.0 * (p - 1.0));
  const double nu = WhittakerParams::from_exponent(p).decay_exponent();
  const int n = static_cast<int>(std::ceil(opts.eta_inf / opts.step - 1e-9));
  const double h = opts.eta_inf / n;

  // omega = e^{-eta^2/4} y with y'' = (eta/2) y' + (1/2 - a) y and
  // y ~ sum_k c_k eta^{nu - 2k}, c_k = -c_{k-1} (nu - 2k + 2)(nu - 2k + 1) / k.
  SelfSimilarProfile prof;
  prof.p = p;
  prof.eta_inf = opts.eta_inf;
  const double X = opts.eta_inf;
  double y = 0.0, dy = 0.0, ck = 1.0, prev = INFINITY;
  for (int k = 0; k < 40; ++k) {
    if (k > 0) ck *= -(nu - 2.0 * k + 2.0) * (nu - 2.0 * k + 1.0) / k;
    const double term = ck * std::pow(X, nu - 2.0 * k);
    if (std::abs(term) >= prev) break;  // asymptotic series: stop at the smallest term
    y += term;
    dy += ck * (nu - 2.0 * k) * std::pow(X, nu - 2.0 * k - 1.0);
    prof.seed_terms = k + 1;
    prev = std::abs(term);
    if (term == 0.0 || std::abs(term) < 1e-18 * std::abs(y)) break;
  }

  auto rhs = [a](double eta, const Eigen::Vector2d& v) {
    return Eigen::Vector2d(v[1], 0.5 * eta * v[1] + (0.5 - a) * v[0]);
  };
  Eigen::VectorXd ys(n + 1), dys(n + 1);
  Eigen::Vector2d v(y, dy);
  ys[n] = y, dys[n] = dy;
  for (int i = n - 1; i >= 0; --i) {
    v = integrate_dopri5(rhs, v, (i + 1) * h, i * h, opts.rtol, 1e-15 * std::max(1.0, v.cwiseAbs().maxCoeff()));
    ys[i] = v[0], dys[i] = v[1];
  }

  prof.eta = Eigen::VectorXd::LinSpaced(n + 1, 0.0, opts.eta_inf);
  prof.omega1.resize(n + 1);
  prof.omega1_prime.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double e = prof.eta[i], w = std::exp(-0.25 * e * e);
    prof.omega1[i] = w * ys[i];
    prof.omega1_prime[i] = w * (dys[i] - 0.5 * e * ys[i]);
  }
  prof.omega = prof.omega1;
  prof.omega_prime = prof.omega1_prime;
  const double w0 = prof.omega1[0];
  prof.rho = w0 == 0.0 ? 0.0 : prof.omega1_prime[0] / (std::pow(std::abs(w0), p - 1.0) * w0);
  prof.reason = "decaying solution only";
  prof.interp = MonotoneCubic(prof.eta, prof.omega);
  return prof;
}

SelfSimilarProfile profile_constant(double p, const ProfileOptions& opts) {
  SelfSimilarProfile prof = decaying_profile(p, opts);
  const double scale = prof.omega1.cwiseAbs().maxCoeff();
  if (std::abs(prof.omega1[0]) <= 1e-8 * scale)
    throw Error(ErrorKind::Inconclusive, "omega_1(0) vanishes; matching constant undefined");
  if (prof.rho <= 1e-9) {
    prof.reason = "omega_1'(0) / omega_1(0)^p is not positive";
    return prof;
  }
  if (prof.omega1.minCoeff() <= 0.0) {
    prof.reason = "omega_1 changes sign on [0, eta_inf]";
    return prof;
  }
  const double c = std::pow(prof.rho, 1.0 / (p - 1.0));
  prof.exists = true;
  prof.c = c;
  prof.reason.clear();
  prof.omega = c * prof.omega1;
  prof.omega_prime = c * prof.omega1_prime;
  prof.interp = MonotoneCubic(prof.eta, prof.omega);
  return prof;
}

EnvelopeRatios envelope_check(const SelfSimilarProfile& profile, double eta_lo, double eta_hi) {
  require(eta_lo > 0 && eta_lo < eta_hi && eta_hi <= profile.eta_inf - 2.0 + 1e-12,
          "envelope_check: need 0 < eta_lo < eta_hi <= eta_inf - 2");
  const double nu = 1.0 / (profile.p - 1.0) - 1.0;
  EnvelopeRatios r{INFINITY, -INFINITY};
  for (Eigen::Index i = 0; i < profile.eta.size(); ++i) {
    const double e = profile.eta[i];
    if (e < eta_lo - 1e-12 || e > eta_hi + 1e-12) continue;
    const double ratio = std::exp(0.25 * e * e) * profile.omega[i] / std::pow(e, nu);
    r.ratio_min = std::min(r.ratio_min, ratio);
    r.ratio_max = std::max(r.ratio_max, ratio);
  }
  return r;
}

double self_similar_solution(const SelfSimilarProfile& profile, double t, double x) {
  require(profile.exists, "self_similar_solution: profile has no matching constant");
  require(t > 0 && x >= 0, "self_similar_solution: need t > 0, x >= 0");
  const double eta = x / std::sqrt(t);
  require(eta <= profile.eta_inf, "self_similar_solution: x / sqrt(t) beyond eta_inf");
  return std::pow(t, -1.0 / (2.0 * (profile.p - 1.0))) * profile(eta);
}

}  // namespace nlflux
