#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlflux/numerics.hpp"
#include "nlflux/self_similar.hpp"

using namespace nlflux;

namespace {

// omega_1(0) and omega_1'(0) / omega_1(0) for omega_1 ~ eta^nu e^{-eta^2/4}, from
// the Hermite-function representation of the decaying solution.
double omega1_at_zero(double nu) { return std::pow(2.0, nu) * kSqrtPi / std::tgamma((1 - nu) / 2); }
double log_slope_at_zero(double nu) { return nu / 2 * std::tgamma((1 - nu) / 2) / std::tgamma(1 - nu / 2); }

double d1(const Eigen::VectorXd& f, int i, double h) {
  return (-f[i + 2] + 8 * f[i + 1] - 8 * f[i - 1] + f[i - 2]) / (12 * h);
}

}  // namespace

TEST_CASE("whittaker parameters") {
  for (double p : {1.3, 1.75, 2.5}) {
    const WhittakerParams w = WhittakerParams::from_exponent(p);
    CHECK(w.k == doctest::Approx(1 / (2 * (p - 1)) - 0.25).epsilon(1e-15));
    CHECK(w.mu == 0.25);
    CHECK(w.k - w.mu - 0.5 == doctest::Approx(1 / (2 * (p - 1)) - 1).epsilon(1e-14));
    CHECK(w.decay_exponent() == doctest::Approx(1 / (p - 1) - 1).epsilon(1e-14));
  }
  CHECK(WhittakerParams::r(4.0) == 4.0);
}

TEST_CASE("decaying solution against its closed-form values at zero") {
  for (double p : {1.3, 1.6, 1.75, 1.9, 2.5}) {
    const SelfSimilarProfile w = decaying_profile(p);
    const double nu = 1 / (p - 1) - 1;
    CHECK(w.omega1[0] == doctest::Approx(omega1_at_zero(nu)).epsilon(1e-8));
    CHECK(w.omega1_prime[0] / w.omega1[0] == doctest::Approx(log_slope_at_zero(nu)).epsilon(1e-8));
  }
}

TEST_CASE("closed form at p = 2") {
  const SelfSimilarProfile w = decaying_profile(2.0);
  const double c = w.omega1[0];
  for (Eigen::Index i = 0; i < w.eta.size() && w.eta[i] <= 6.0; ++i)
    CHECK(w.omega1[i] * std::exp(w.eta[i] * w.eta[i] / 4) == doctest::Approx(c).epsilon(1e-6));
  const EnvelopeRatios env = envelope_check(w, 0.25, 8.0);
  CHECK(env.ratio_max / env.ratio_min - 1 < 1e-6);
}

TEST_CASE("ODE residual and Wronskian") {
  const double p = 1.75;
  const SelfSimilarProfile w = decaying_profile(p);
  const double h = w.eta[1] - w.eta[0];
  const double scale = w.omega1.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 2; i + 2 < w.eta.size(); i += 7) {
    const double res = d1(w.omega1_prime, i, h) + w.eta[i] / 2 * w.omega1_prime[i] + w.omega1[i] / (2 * (p - 1));
    CHECK(std::abs(res) < 1e-6 * scale);
  }
  // second solution with y(0) = 1, y'(0) = 0; W e^{eta^2/4} is constant
  auto rhs = [&](double eta, const Eigen::Vector2d& y) {
    return Eigen::Vector2d(y[1], -eta / 2 * y[1] - y[0] / (2 * (p - 1)));
  };
  const double w0 = w.omega1[0] * 0.0 - w.omega1_prime[0] * 1.0;
  for (double eta : {1.0, 2.0, 3.0, 4.0}) {
    const Eigen::Vector2d y = integrate_dopri5(rhs, Eigen::Vector2d(1.0, 0.0), 0.0, eta, 1e-12, 1e-14);
    const int i = static_cast<int>(std::lround(eta / h));
    const double wr = w.omega1[i] * y[1] - w.omega1_prime[i] * y[0];
    CHECK(wr * std::exp(eta * eta / 4) == doctest::Approx(w0).epsilon(1e-6));
  }
}

TEST_CASE("seed robustness: eta_inf 12 against 14") {
  ProfileOptions a, b;
  a.eta_inf = 12.0;
  b.eta_inf = 14.0;
  const SelfSimilarProfile pa = profile_constant(1.75, a), pb = profile_constant(1.75, b);
  for (Eigen::Index i = 0; i < pa.eta.size() && pa.eta[i] <= 8.0; ++i)
    CHECK(pa.omega[i] == doctest::Approx(pb.omega[i]).epsilon(1e-6));
}

TEST_CASE("matching constant and boundary relation") {
  const SelfSimilarProfile s = profile_constant(1.75);
  REQUIRE(s.exists);
  REQUIRE(s.c);
  CHECK(*s.c > 0);
  CHECK(s.omega_prime[0] == doctest::Approx(std::pow(s.omega[0], 1.75)).epsilon(1e-8));
  CHECK(s.omega.minCoeff() > 0);
  CHECK(*s.c == doctest::Approx(std::pow(s.rho, 1 / 0.75)).epsilon(1e-12));
  CHECK(s(0.0) == s.omega[0]);
}

TEST_CASE("existence window") {
  CHECK_FALSE(profile_constant(2.0).exists);
  CHECK_FALSE(profile_constant(1.4).exists);
  CHECK_FALSE(profile_constant(1.4).reason.empty());
  int wrong = 0;
  for (int i = 0; i <= 18; ++i) {
    const double p = 1.30 + 0.05 * i;
    try {
      wrong += profile_constant(p).exists != (p > 1.5 + 1e-9 && p < 2.0 - 1e-9);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Inconclusive);
      CHECK(std::abs(p - 1.5) < 1e-9);
    }
  }
  CHECK(wrong == 0);
  CHECK_THROWS_AS(decaying_profile(3.0), Error);
}

TEST_CASE("envelope at p = 1.75") {
  const EnvelopeRatios env = envelope_check(profile_constant(1.75), 0.25, 8.0);
  CHECK(env.ratio_min > 0);
  CHECK(env.ratio_max / env.ratio_min < 10);
  CHECK_THROWS_AS(envelope_check(profile_constant(1.75), 0.25, 13.0), Error);
}

TEST_CASE("self-similar solution is scale invariant") {
  const double p = 1.75, k = 3.0;
  const SelfSimilarProfile s = profile_constant(p);
  CHECK(self_similar_solution(s, 1.0, 0.0) == doctest::Approx(s.omega[0]).epsilon(1e-15));
  for (auto [t, x] : {std::pair{0.1, 0.2}, std::pair{0.5, 1.0}, std::pair{0.9, 2.5}}) {
    const double lhs = std::pow(k, 1 / (p - 1)) * self_similar_solution(s, k * k * t, k * x);
    CHECK(lhs == doctest::Approx(self_similar_solution(s, t, x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(self_similar_solution(s, 0.01, 5.0), Error);
  CHECK_THROWS_AS(self_similar_solution(decaying_profile(2.2), 1.0, 0.0), Error);
}
