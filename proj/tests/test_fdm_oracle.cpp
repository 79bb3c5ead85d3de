#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nlflux/fdm_oracle.hpp"
#include "nlflux/kernels.hpp"

using namespace nlflux;

namespace {

const FluxLaw kLaw = FluxLaw::power(1.75);

// Max trace error of the manufactured solution u = e^{t - x} on (0, 1).
double manufactured_error(TimeScheme scheme, int nt) {
  FdmConfig cfg;
  cfg.nx = 4096;
  cfg.nt = nt;
  cfg.scheme = scheme;
  const FdmResult r = solve_fdm_interval(
      kLaw, [](double x) { return std::exp(-x); }, [](double t) { return std::exp(t) + kLaw.g(std::exp(t)); },
      [](double t) { return -std::exp(t - 1) + kLaw.g(std::exp(t - 1)); }, 0.0, 1.0, 1.0, cfg);
  double err = 0.0;
  for (int n = 0; n <= nt; ++n) {
    err = std::max(err, std::abs(r.trace[n] - std::exp(r.times[n])));
    err = std::max(err, std::abs(r.trace_right[n] - std::exp(r.times[n] - 1)));
  }
  return err;
}

}  // namespace

TEST_CASE("manufactured solution: observed temporal orders") {
  for (auto [scheme, order] : {std::pair{TimeScheme::ImplicitEuler, 1.0}, std::pair{TimeScheme::CrankNicolson, 2.0}}) {
    const double e1 = manufactured_error(scheme, 32), e2 = manufactured_error(scheme, 64), e3 = manufactured_error(scheme, 128);
    CHECK(std::log2(e1 / e2) == doctest::Approx(order).epsilon(0.1));
    CHECK(std::log2(e2 / e3) == doctest::Approx(order).epsilon(0.1));
  }
}

TEST_CASE("linear case matches the kernel formula") {
  const FluxLaw zero = FluxLaw::tabulated({{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}});
  auto nu = [](double x) { return std::exp(-(x - 1.0) * (x - 1.0) * 4); };
  FdmConfig cfg;
  cfg.nx = 4096;
  cfg.nt = 1024;
  const FdmResult r = solve_fdm(zero, nu, [](double t) { return t; }, 1.0, cfg);
  const MeasureData nu_m = MeasureData::initial({}, PiecewiseLinear::sample(nu, 0.0, 5.0, 5001));
  const MeasureData mu_m = MeasureData::boundary(1.0, {}, PiecewiseLinear::sample([](double t) { return t; }, 0.0, 1.0, 2));
  for (int n : {128, 512, 1024}) {
    const double want = linear_solution(nu_m, mu_m, r.times[n], 0.0);
    CHECK(r.trace[n] == doctest::Approx(want).epsilon(1e-3));
  }
}

TEST_CASE("discrete mass balance") {
  FdmConfig cfg;
  cfg.nx = 512;
  cfg.nt = 256;
  const FdmResult r = solve_fdm(kLaw, [](double x) { return std::exp(-x * x); },
                                [](double t) { return std::pow(std::sin(kPi * t), 2); }, 1.0, cfg);
  CHECK(r.mass_balance_residual < 1e-6);
}

TEST_CASE("nonnegative data give nonnegative monotone solutions") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FdmConfig cfg;
  cfg.nx = 256;
  cfg.nt = 128;
  cfg.scheme = TimeScheme::ImplicitEuler;
  cfg.frame_stride = 32;
  for (int trial = 0; trial < 5; ++trial) {
    const double a = u(rng), b = a + u(rng), m = u(rng), dm = u(rng), w = 1 + 4 * u(rng);
    auto mu_lo = [=](double t) { return m * (1 + std::sin(w * t)); };
    auto mu_hi = [=](double t) { return (m + dm) * (1 + std::sin(w * t)); };
    const FdmResult lo = solve_fdm(kLaw, [=](double x) { return a * std::exp(-x * x); }, mu_lo, 1.0, cfg);
    const FdmResult hi = solve_fdm(kLaw, [=](double x) { return b * std::exp(-x * x); }, mu_hi, 1.0, cfg);
    for (int n = 0; n <= cfg.nt; ++n) CHECK(lo.trace[n] <= hi.trace[n] + 1e-14);
    CHECK(lo.frames.size() == 4);
    for (const FieldSnapshot& f : lo.frames) CHECK(f.u.minCoeff() >= 0.0);
  }
}

TEST_CASE("configuration checks") {
  FdmConfig cfg;
  cfg.nx = 16;
  CHECK_THROWS_AS(solve_fdm(kLaw, [](double) { return 0.0; }, [](double) { return 0.0; }, 1.0, cfg), Error);
  cfg.nx = 64;
  cfg.L = 5.0;
  CHECK_THROWS_AS(solve_fdm(kLaw, [](double) { return 0.0; }, [](double) { return 0.0; }, 1.0, cfg), Error);
}
