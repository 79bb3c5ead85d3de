#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nlflux/numerics.hpp"
#include "nlflux/self_similar.hpp"
#include "nlflux/spectral_weighted.hpp"

using namespace nlflux;

namespace {

const WeightedGrid& grid() {
  static const WeightedGrid g(12.0, 2048);
  return g;
}

Eigen::VectorXd gaussian(const WeightedGrid& g) { return (-g.nodes.array().square() / 4).exp().matrix(); }

Eigen::VectorXd random_grid_fn(std::mt19937_64& rng, const WeightedGrid& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double a = n(rng), b = n(rng), c = 1 + std::abs(n(rng));
  Eigen::VectorXd f(g.n);
  for (int i = 0; i < g.n; ++i) f[i] = (a + b * std::cos(c * g.nodes[i])) * std::exp(-g.nodes[i] * g.nodes[i] / 3.5);
  f[g.n - 1] = 0.0;
  return f;
}

}  // namespace

TEST_CASE("operator on the Gaussian") {
  const WeightedForms forms = assemble_LK(grid(), BoundaryCondition::Neumann);
  const Eigen::VectorXd phi = gaussian(grid());
  const Eigen::VectorXd L = apply_LK(forms, phi);
  for (int i = 0; i < grid().n && grid().nodes[i] < 8.0; ++i) CHECK(L[i] == doctest::Approx(0.5 * phi[i]).epsilon(1e-3));
}

TEST_CASE("forms are symmetric and nonnegative") {
  std::mt19937_64 rng(43);
  for (BoundaryCondition bc : {BoundaryCondition::Neumann, BoundaryCondition::Dirichlet}) {
    const WeightedForms forms = assemble_LK(grid(), bc);
    CHECK((Eigen::MatrixXd(forms.A) - Eigen::MatrixXd(forms.A).transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::VectorXd u = forms.restrict(random_grid_fn(rng, grid()));
      const Eigen::VectorXd v = forms.restrict(random_grid_fn(rng, grid()));
      CHECK(u.dot(forms.A * v) == doctest::Approx(v.dot(forms.A * u)).epsilon(1e-11));
      CHECK(u.dot(forms.A * u) >= 0.0);
      if (bc == BoundaryCondition::Neumann) CHECK(u.dot(forms.A * u) / u.dot(forms.M * u) >= 0.5 - 1e-3);
    }
  }
}

TEST_CASE("spectra") {
  const WeightedEigenResult n = eigen_smallest(grid(), BoundaryCondition::Neumann, 3);
  const WeightedEigenResult d = eigen_smallest(grid(), BoundaryCondition::Dirichlet, 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(n.eigenvalues[k] == doctest::Approx(0.5 + k).epsilon(1e-2));
    CHECK(d.eigenvalues[k] == doctest::Approx(1.0 + k).epsilon(1e-2));
  }
  const Eigen::VectorXd g = gaussian(grid()), v = n.eigenvectors.col(0);
  CHECK(std::abs(g.dot(v)) / (g.norm() * v.norm()) > 1 - 1e-6);

  // K-orthonormality through the mass form
  const WeightedForms forms = assemble_LK(grid(), BoundaryCondition::Dirichlet);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double m = forms.restrict(d.eigenvectors.col(i)).dot(forms.M * forms.restrict(d.eigenvectors.col(j)));
      CHECK(m == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-8));
    }
}

TEST_CASE("eigenvalues settle under grid doubling") {
  const WeightedEigenResult a = eigen_smallest(WeightedGrid(12.0, 1024), BoundaryCondition::Neumann, 3);
  const WeightedEigenResult b = eigen_smallest(WeightedGrid(12.0, 2048), BoundaryCondition::Neumann, 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(a.eigenvalues[k] - b.eigenvalues[k]) < 1e-3);
}

TEST_CASE("functional J on the Gaussian ray") {
  const double p = 1.75, eps = 0.1;
  CHECK(functional_J(grid(), Eigen::VectorXd::Zero(grid().n), p) == 0.0);
  // (1/2)(|phi'|^2 - |phi|^2 / (2(p-1))) with int e^{-eta^2/4} = sqrt(pi) and
  // int (eta^2 / 4) e^{-eta^2/4} = sqrt(pi) / 2, both over (0, inf)
  const double want = eps * eps * kSqrtPi * (0.25 - 1 / (4 * (p - 1))) + std::pow(eps, p + 1) / (p + 1);
  const double got = functional_J(grid(), eps * gaussian(grid()), p);
  CHECK(got == doctest::Approx(want).epsilon(1e-3));
  CHECK(got < 0);
}

TEST_CASE("minimizer of J against the ODE profile") {
  for (double p : {1.6, 1.75}) {
    const Minimizer m = minimize_J(grid(), p);
    const SelfSimilarProfile s = profile_constant(p);
    double diff = 0.0, scale = 0.0;
    for (int i = 0; i < grid().n; ++i) {
      diff = std::max(diff, std::abs(m.phi[i] - s(grid().nodes[i])));
      scale = std::max(scale, std::abs(s(grid().nodes[i])));
    }
    CHECK(diff / scale < 1e-3);
    CHECK(m.value < functional_J(grid(), 0.1 * gaussian(grid()), p));
    CHECK(m.value < 0);
    CHECK(m.phi.minCoeff() >= 0.0);

    const double h = grid().spacing();
    const double slope = (-3 * m.phi[0] + 4 * m.phi[1] - m.phi[2]) / (2 * h);
    CHECK(slope == doctest::Approx(std::pow(m.phi[0], p)).epsilon(1e-3));
    const double top = m.phi.cwiseAbs().maxCoeff();
    for (int i = 1; i + 1 < grid().n; i += 13) {
      const double d2 = (m.phi[i + 1] - 2 * m.phi[i] + m.phi[i - 1]) / (h * h);
      const double d1 = (m.phi[i + 1] - m.phi[i - 1]) / (2 * h);
      CHECK(std::abs(d2 + grid().nodes[i] / 2 * d1 + m.phi[i] / (2 * (p - 1))) < 1e-3 * top);
    }
  }
  CHECK_THROWS_AS(minimize_J(grid(), 2.1), Error);
}

TEST_CASE("J is coercive along a ray") {
  std::mt19937_64 rng(47);
  const Eigen::VectorXd dir = gaussian(grid()) + 0.3 * random_grid_fn(rng, grid());
  CHECK(functional_J(grid(), 1e3 * dir, 1.75) > functional_J(grid(), 10 * dir, 1.75));
}
