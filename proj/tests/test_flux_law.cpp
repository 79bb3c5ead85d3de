#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nlflux/error.hpp"
#include "nlflux/flux_law.hpp"

using namespace nlflux;

namespace {

FluxLaw sample_table() { return FluxLaw::tabulated({{-2.0, -3.0}, {-0.5, -0.5}, {0.0, 0.0}, {1.0, 0.25}, {3.0, 4.0}}); }

// int_0^s of the piecewise-linear table, by the trapezoid rule on a fine grid.
double table_antiderivative(const FluxLaw& law, double s) {
  const int n = 20000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = s * i / n, b = s * (i + 1) / n;
    acc += 0.5 * (law.g(a) + law.g(b)) * (b - a);
  }
  return acc;
}

}  // namespace

TEST_CASE("power law values") {
  const FluxLaw g = FluxLaw::power(2.0);
  CHECK(eval_g(g, 2.0) == 4.0);
  CHECK(eval_g(g, -2.0) == -4.0);
  CHECK(eval_g(g, 0.0) == 0.0);
  CHECK(eval_g(sample_table(), 0.0) == 0.0);
  CHECK(FluxLaw::power(1.75).G(2.0) == doctest::Approx(std::pow(2.0, 2.75) / 2.75));
}

TEST_CASE("power law is odd and monotone; G convex") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> s(-5.0, 5.0), p(1.05, 2.5);
  for (int trial = 0; trial < 50; ++trial) {
    const FluxLaw g = FluxLaw::power(p(rng));
    const double a = s(rng), b = s(rng);
    CHECK(g.g(-a) == -g.g(a));
    CHECK(g.g(std::min(a, b)) <= g.g(std::max(a, b)));
    const double h = 1e-3;
    CHECK(g.G(a + h) - 2 * g.G(a) + g.G(a - h) >= -1e-12);
  }
}

TEST_CASE("tabulated law: monotone, linear extrapolation, exact antiderivative") {
  const FluxLaw g = sample_table();
  CHECK(g.g(0.5) == doctest::Approx(0.125));
  CHECK(g.g(5.0) == doctest::Approx(4.0 + 2.0 * 1.875));
  CHECK(g.g(-3.0) == doctest::Approx(-3.0 - 5.0 / 3.0));
  CHECK(g.growth_exponent() == 1.0);
  for (double s : {-4.0, -1.0, -0.2, 0.7, 2.5, 6.0}) CHECK(g.G(s) == doctest::Approx(table_antiderivative(g, s)).epsilon(1e-7));
  double prev = -INFINITY;
  for (int i = -100; i <= 100; ++i) {
    CHECK(g.g(i * 0.07) >= prev);
    prev = g.g(i * 0.07);
  }
}

TEST_CASE("tabulated law rejects bad tables") {
  try {
    (void)FluxLaw::tabulated({{-1.0, 0.0}, {0.0, 0.0}, {1.0, -1.0}});
    FAIL("decreasing table accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonmonotoneLaw);
  }
  CHECK_THROWS_AS((void)FluxLaw::tabulated({{-1.0, 0.0}, {1.0, 1.0}}), Error);
}

TEST_CASE("admissibility closed forms") {
  auto oracle = [](double p, int n) { return 2.0 / ((n + 1.0) / n - p); };
  const AdmissibilityResult a = admissibility_integral(FluxLaw::power(1.5), 1);
  CHECK(a.finite);
  CHECK(a.value == doctest::Approx(4.0).epsilon(1e-9));
  const AdmissibilityResult b = admissibility_integral(FluxLaw::power(1.4), 2);
  CHECK(b.finite);
  CHECK(b.value == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(admissibility_integral(FluxLaw::power(1.2), 3).value == doctest::Approx(oracle(1.2, 3)).epsilon(1e-9));
  CHECK_FALSE(admissibility_integral(FluxLaw::power(2.2), 1).finite);
}

TEST_CASE("admissibility: critical exponent is inconclusive, not silently classified") {
  try {
    (void)admissibility_integral(FluxLaw::power(2.0), 1);
    FAIL("critical exponent classified");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Inconclusive);
  }
}

TEST_CASE("admissibility finiteness iff p < (n+1)/n outside the dead band") {
  for (int n : {1, 2, 3}) {
    const double crit = (n + 1.0) / n;
    for (int i = 2; i <= 46; i += 4) {
      const double p = 0.05 * i;
      if (std::abs(p - crit) < 0.05 + 1e-9) continue;
      CHECK(admissibility_integral(FluxLaw::power(p), n).finite == (p < crit));
    }
  }
}

TEST_CASE("bounded tabulated law is admissible for n = 1") {
  const FluxLaw sat = FluxLaw::tabulated({{-2.0, -1.0}, {-1.0, -1.0}, {0.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}});
  CHECK(sat.growth_exponent() == 0.0);
  const AdmissibilityResult r = admissibility_integral(sat, 1);
  CHECK(r.finite);
  // integrand 2 s^{-3} beyond s = 1, whose integral is 1
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
}
