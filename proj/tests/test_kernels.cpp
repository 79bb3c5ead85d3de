#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nlflux/kernels.hpp"

using namespace nlflux;

namespace {

// int_{s0}^{s1} E(t - s, d) phi(s) ds with s = t - w^2, which removes the
// endpoint singularity when s1 = t.
double kernel_moment_oracle(double t, double s0, double s1, double d, const std::function<double(double)>& phi) {
  const double w0 = std::sqrt(t - s1), w1 = std::sqrt(t - s0);
  auto f = [&](double w) { return w == 0 ? 0.0 : std::exp(-d * d / (4 * w * w)) * phi(t - w * w) / kSqrtPi; };
  return adaptive_gauss_kronrod(f, w0, w1, 1e-15, 1e-12).value;
}

// |{(tau, z) : E(tau, z) >= 1}| on the full line.
double full_line_ball() {
  const double tau_max = 1.0 / (4 * kPi);
  auto width = [&](double tau) {
    const double l = std::log(1.0 / std::sqrt(4 * kPi * tau));
    return l > 0 ? 2.0 * std::sqrt(4 * tau * l) : 0.0;
  };
  return adaptive_gauss_kronrod(width, 0.0, tau_max, 1e-14, 1e-12).value;
}

MeasureData random_boundary(std::mt19937_64& rng, double T) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Atom> atoms{{0.0, u(rng)}, {0.2 + 0.5 * u(rng), u(rng)}};
  const double a = u(rng), w = 1 + 3 * u(rng);
  return MeasureData::boundary(T, atoms, PiecewiseLinear::sample([=](double s) { return a * (1 + std::sin(w * s)); }, 0, T, 65));
}

MeasureData random_initial(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Atom> atoms{{0.3 + u(rng), u(rng)}};
  const double a = u(rng), c = 0.5 + u(rng);
  return MeasureData::initial(atoms, PiecewiseLinear::sample([=](double y) { return a * std::exp(-(y - c) * (y - c) * 4); }, 0, 4, 129));
}

}  // namespace

TEST_CASE("heat kernel normalization and symmetry") {
  CHECK(2 * heat_kernel(1.0, 0.0) == doctest::Approx(0.5641895835477563).epsilon(1e-15));
  const double mass = adaptive_gauss_kronrod([](double x) { return heat_kernel(0.37, x); }, -20, 20, 1e-14).value;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(heat_kernel(0.2, 1.3) == heat_kernel(0.2, -1.3));
  CHECK_THROWS_AS(heat_kernel(0.0, 1.0), Error);
}

TEST_CASE("mirrored kernel") {
  CHECK(mirrored_kernel(0.5, 0.7, 0.0) == doctest::Approx(2 * heat_kernel(0.5, 0.7)).epsilon(1e-15));
  const double h = 1e-5;
  CHECK(std::abs(mirrored_kernel(0.3, h, 1.1) - mirrored_kernel(0.3, -h, 1.1)) / (2 * h) < 1e-8);
  const double mass = adaptive_gauss_kronrod([](double y) { return mirrored_kernel(0.4, 0.9, y); }, 0, 20, 1e-14).value;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  // templated kernel evaluated in long double agrees
  CHECK(static_cast<double>(mirrored_kernel<long double>(0.4L, 0.9L, 0.3L)) ==
        doctest::Approx(mirrored_kernel(0.4, 0.9, 0.3)).epsilon(1e-14));
}

TEST_CASE("kernel moments against substituted quadrature") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double t = 0.1 + u(rng);
    const double s1 = trial % 3 == 0 ? t : t * u(rng);
    const double s0 = s1 * std::pow(u(rng), 1 + 4 * u(rng));
    const double d = trial % 4 == 0 ? 0.0 : 2.0 * u(rng) * u(rng);
    const KernelMoments m = heat_kernel_moments(t, s0, s1, d);
    const double o0 = kernel_moment_oracle(t, s0, s1, d, [](double) { return 1.0; });
    const double o1 = kernel_moment_oracle(t, s0, s1, d, [&](double s) { return s - s0; });
    CHECK(m.m0 == doctest::Approx(o0).epsilon(1e-9).scale(1e-12));
    CHECK(m.m1 == doctest::Approx(o1).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("kernel moments of a tiny cell far in the past keep their digits") {
  const double t = 1.0, s0 = 1e-12, s1 = 2e-12;
  const KernelMoments m = heat_kernel_moments(t, s0, s1, 0.0);
  // E(t - s, 0) is nearly constant over the cell
  CHECK(m.m0 == doctest::Approx(1e-12 * heat_kernel(1.0 - 1.5e-12, 0.0)).epsilon(1e-10));
  CHECK(m.m1 == doctest::Approx(0.5e-24 * heat_kernel(1.0 - 1.5e-12, 0.0)).epsilon(1e-9));
}

TEST_CASE("linear solution oracles") {
  const MeasureData none = MeasureData::initial();
  const MeasureData dirac = MeasureData::dirac_at_origin(2.0, 1.0);
  CHECK(linear_solution(none, dirac, 1.0, 0.0) == doctest::Approx(0.5641895835477563).epsilon(1e-14));
  CHECK(linear_solution(none, dirac, 0.7, 0.4) ==
        doctest::Approx(std::exp(-0.16 / 2.8) / std::sqrt(kPi * 0.7)).epsilon(1e-14));
  CHECK(linear_solution(none, MeasureData::boundary(2.0), 0.5, 0.5) == 0.0);

  // even Gaussian e^{-y^2}: the mirror image completes the full-line convolution
  const MeasureData gauss =
      MeasureData::initial({}, PiecewiseLinear::sample([](double y) { return std::exp(-y * y); }, 0.0, 9.0, 9001));
  for (auto [t, x] : {std::pair{0.3, 0.0}, std::pair{1.0, 0.8}, std::pair{2.5, 3.0}}) {
    const double want = std::exp(-x * x / (1 + 4 * t)) / std::sqrt(1 + 4 * t);
    CHECK(linear_solution(gauss, MeasureData::boundary(3.0), t, x) == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("linear solution is linear and positive") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const MeasureData n1 = random_initial(rng), n2 = random_initial(rng);
    const MeasureData m1 = random_boundary(rng, 1.0), m2 = random_boundary(rng, 1.0);
    MeasureData n12 = n1, m12 = m1;
    n12.atoms.insert(n12.atoms.end(), n2.atoms.begin(), n2.atoms.end());
    n12.density->values += n2.density->values;
    m12.atoms.insert(m12.atoms.end(), m2.atoms.begin(), m2.atoms.end());
    m12.density->values += m2.density->values;
    const double t = 0.05 + 0.95 * u(rng), x = 2 * u(rng);
    const double sum = linear_solution(n1, m1, t, x) + linear_solution(n2, m2, t, x);
    CHECK(linear_solution(n12, m12, t, x) == doctest::Approx(sum).epsilon(1e-9));
    CHECK(linear_solution(n1, m1, t, x) >= 0.0);
  }
}

TEST_CASE("measure data bookkeeping") {
  const MeasureData mu = MeasureData::boundary(
      1.0, {{0.0, 0.5}, {0.5, -0.25}}, PiecewiseLinear::sample([](double s) { return s - 0.5; }, 0.0, 1.0, 3));
  CHECK(mu.total_variation() == doctest::Approx(0.75 + 0.25));
  CHECK(mu.atom_mass_at_origin() == 0.5);
  CHECK(difference_total_variation(mu, mu) == 0.0);
  CHECK(difference_total_variation(mu, MeasureData::boundary(1.0)) == doctest::Approx(mu.total_variation()));
  CHECK_THROWS_AS(MeasureData::boundary(1.0, {{1.0, 1.0}}).validate(), Error);
  CHECK_THROWS_AS(MeasureData::initial({{-0.1, 1.0}}).validate(), Error);
}

TEST_CASE("weak quasinorm oracles") {
  std::vector<std::pair<double, double>> ind{{0.25, 1.0}, {0.75, 0.0}};
  CHECK(weak_norm(ind, 2.0) == doctest::Approx(0.5));

  // f(s) = s^{-1/2} on (0, 1]; cells sampled at their right end (the smaller value)
  std::vector<std::pair<double, double>> root, trace;
  const int n = 20000;
  for (int k = 1; k <= n; ++k) {
    const double a = std::pow(double(k - 1) / n, 3), b = std::pow(double(k) / n, 3);
    root.emplace_back(b - a, 1 / std::sqrt(b));
    trace.emplace_back(b - a, 1 / std::sqrt(kPi * b));
  }
  CHECK(weak_norm(root, 2.0) == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(weak_norm(trace, 2.0) == doctest::Approx(1 / kSqrtPi).epsilon(1e-2));
  CHECK_THROWS_AS(weak_norm(std::vector<std::pair<double, double>>{}, 2.0), Error);
}

TEST_CASE("heat ball measures against their exact values") {
  const double c = full_line_ball();
  CHECK(c == doctest::Approx(0.030630).epsilon(1e-4));
  for (double r : {1.0, 2.0}) {
    // far from the boundary the mirror image is negligible: |e| = c / r^3
    const HeatBallEstimate far = heat_ball_measure({1.0, 10.0, r, 1000000, 3});
    CHECK(std::abs(far.estimate - c / (r * r * r)) < 4 * far.std_error);
    // at x = 0 the set is {E(tau, y) >= r/2, y >= 0}: half of c (2/r)^3
    const HeatBallEstimate wall = heat_ball_measure({1.0, 0.0, r, 1000000, 4});
    CHECK(std::abs(wall.estimate - 4 * c / (r * r * r)) < 4 * wall.std_error);
    const HeatBallEstimate bdry = boundary_heat_ball_measure({1.0, 0.0, r, 1000000, 5});
    CHECK(std::abs(bdry.estimate - 1 / (4 * kPi * r * r)) < 4 * bdry.std_error + 1e-12);
  }
}

TEST_CASE("heat ball level sets nest and replay from the seed") {
  const HeatBallEstimate r1 = heat_ball_measure({1.0, 0.5, 1.0, 200000, 11});
  const HeatBallEstimate r2 = heat_ball_measure({1.0, 0.5, 2.0, 200000, 12});
  CHECK(r2.estimate <= r1.estimate + 3 * std::hypot(r1.std_error, r2.std_error));
  const HeatBallEstimate again = heat_ball_measure({1.0, 0.5, 1.0, 200000, 11});
  CHECK(again.estimate == r1.estimate);
  CHECK(again.seed == 11);
  CHECK_THROWS_AS(heat_ball_measure({1.0, 0.5, 1.0, 100, 1}), Error);
}
