#include "nlflux/spectral_weighted.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <random>
#include <vector>

#include "nlflux/error.hpp"
#include "nlflux/numerics.hpp"

namespace nlflux {
namespace {

using Sparse = Eigen::SparseMatrix<double>;

// Symmetric diagonal scaling D = diag(M)^{-1/2}; the weight spans ~16 decades.
Eigen::VectorXd mass_scaling(const Sparse& M) { return M.diagonal().cwiseSqrt().cwiseInverse(); }

Sparse scaled(const Sparse& S, const Eigen::VectorXd& d) { return d.asDiagonal() * S * d.asDiagonal(); }

}  // namespace

WeightedGrid::WeightedGrid(double eta_inf_, int n_) : eta_inf(eta_inf_), n(n_) {
  require(n >= 256, "WeightedGrid: need at least 256 nodes");
  require(eta_inf >= 10, "WeightedGrid: eta_inf must be at least 10");
  nodes = Eigen::VectorXd::LinSpaced(n, 0.0, eta_inf);
  K = (0.25 * nodes.array().square()).exp();
  K_inv = K.cwiseInverse();
}

Eigen::VectorXd WeightedForms::extend(const Eigen::VectorXd& coeffs, int n) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  out.segment(first, size) = coeffs;
  return out;
}

WeightedForms assemble_LK(const WeightedGrid& grid, BoundaryCondition bc) {
  WeightedForms f;
  f.first = bc == BoundaryCondition::Dirichlet ? 1 : 0;
  f.size = grid.n - 1 - f.first;
  const double h = grid.spacing();
  const GaussRule& rule = gauss_legendre(5);
  std::vector<Eigen::Triplet<double>> ta, tm;
  auto add = [&](int i, int j, double va, double vm) {
    const int r = i - f.first, c = j - f.first;
    if (r < 0 || c < 0 || r >= f.size || c >= f.size) return;
    ta.emplace_back(r, c, va);
    tm.emplace_back(r, c, vm);
  };
  for (int i = 0; i + 1 < grid.n; ++i) {
    double k0 = 0, m00 = 0, m01 = 0, m11 = 0;
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
      const double s = 0.5 * (1.0 + rule.nodes[q]);
      const double eta = grid.nodes[i] + s * h;
      const double w = 0.5 * h * rule.weights[q] * std::exp(0.25 * eta * eta);
      k0 += w;
      m00 += w * (1 - s) * (1 - s);
      m01 += w * (1 - s) * s;
      m11 += w * s * s;
    }
    const double a = k0 / (h * h);
    add(i, i, a, m00);
    add(i, i + 1, -a, m01);
    add(i + 1, i, -a, m01);
    add(i + 1, i + 1, a, m11);
  }
  f.A.resize(f.size, f.size);
  f.M.resize(f.size, f.size);
  f.A.setFromTriplets(ta.begin(), ta.end());
  f.M.setFromTriplets(tm.begin(), tm.end());
  return f;
}

Eigen::VectorXd apply_LK(const WeightedForms& forms, const Eigen::VectorXd& grid_fn) {
  const Eigen::VectorXd d = mass_scaling(forms.M);
  Eigen::SimplicialLDLT<Sparse> mass(scaled(forms.M, d));
  const Eigen::VectorXd rhs = d.asDiagonal() * (forms.A * forms.restrict(grid_fn));
  const Eigen::VectorXd out = d.asDiagonal() * mass.solve(rhs);
  return forms.extend(out, static_cast<int>(grid_fn.size()));
}

WeightedEigenResult eigen_smallest(const WeightedGrid& grid, BoundaryCondition bc, int count, std::uint64_t seed) {
  require(count >= 1 && count <= 8, "eigen_smallest: count must lie in [1, 8]");
  const WeightedForms f = assemble_LK(grid, bc);
  const Eigen::VectorXd d = mass_scaling(f.M);
  const Sparse A = scaled(f.A, d), M = scaled(f.M, d);
  Eigen::SimplicialLDLT<Sparse> solver(A);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::IntegrationFailure, "eigen_smallest: factorization failed");

  const int m = count + 6;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd X(f.size, m);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = normal(rng);

  WeightedEigenResult res{bc, Eigen::VectorXd(), Eigen::MatrixXd(), grid, 0};
  Eigen::VectorXd prev = Eigen::VectorXd::Constant(count, INFINITY);
  bool converged = false;
  for (int it = 1; it <= 1000 && !converged; ++it) {
    const Eigen::MatrixXd Y = solver.solve(M * X);
    const Eigen::MatrixXd Ar = Y.transpose() * (A * Y);
    const Eigen::MatrixXd Mr = Y.transpose() * (M * Y);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Ar + Ar.transpose()),
                                                                 0.5 * (Mr + Mr.transpose()));
    X = Y * es.eigenvectors();
    const Eigen::VectorXd lam = es.eigenvalues().head(count);
    converged = ((lam - prev).cwiseAbs().array() <= 1e-13 * lam.cwiseAbs().array()).all();
    prev = lam;
    res.iterations = it;
  }
  if (!converged) throw Error(ErrorKind::IntegrationFailure, "eigen_smallest: subspace iteration did not converge");

  res.eigenvalues = prev;
  res.eigenvectors.resize(grid.n, count);
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd v = f.extend(d.asDiagonal() * X.col(k), grid.n);
    Eigen::Index imax;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0) v = -v;
    res.eigenvectors.col(k) = v;
  }
  return res;
}

double functional_J(const WeightedGrid& grid, const Eigen::VectorXd& phi, double p) {
  require(p > 1, "functional_J: p must exceed 1");
  require(phi.size() == grid.n, "functional_J: grid function size mismatch");
  const double h = grid.spacing();
  const double a = 1.0 / (2.0 * (p - 1.0));
  double grad = 0.0, mass = 0.0;
  for (int i = 0; i + 1 < grid.n; ++i) {
    const double dphi = (phi[i + 1] - phi[i]) / h;
    grad += dphi * dphi * 0.5 * h * (grid.K[i] + grid.K[i + 1]);
    mass += 0.5 * h * (phi[i] * phi[i] * grid.K[i] + phi[i + 1] * phi[i + 1] * grid.K[i + 1]);
  }
  return 0.5 * (grad - a * mass) + std::pow(std::abs(phi[0]), p + 1.0) / (p + 1.0);
}

Minimizer minimize_J(const WeightedGrid& grid, double p, double eps0) {
  require(p > 1.5 && p < 2.0, "minimize_J: p must lie in (1.5, 2)");
  require(eps0 > 0, "minimize_J: eps0 must be positive");
  const double a = 1.0 / (2.0 * (p - 1.0));
  const WeightedForms f = assemble_LK(grid, BoundaryCondition::Neumann);
  const Eigen::VectorXd d = mass_scaling(f.M);
  const Sparse A = scaled(f.A, d), M = scaled(f.M, d);
  const Sparse B = A - a * M;
  const Sparse P = A + M;
  Eigen::SimplicialLDLT<Sparse> Bs(B), Ps(P);
  if (Bs.info() != Eigen::Success || Ps.info() != Eigen::Success)
    throw Error(ErrorKind::NoDescent, "minimize_J: factorization failed");
  const double d0 = d[0];
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(f.size);
  e0[0] = 1.0;
  const Eigen::VectorXd w = Bs.solve(e0);

  // Energy and gradient in scaled coordinates phi = D psi.
  auto energy = [&](const Eigen::VectorXd& psi) {
    return 0.5 * psi.dot(B * psi) + std::pow(std::abs(d0 * psi[0]), p + 1.0) / (p + 1.0);
  };
  auto gradient = [&](const Eigen::VectorXd& psi) {
    Eigen::VectorXd g = B * psi;
    const double u0 = d0 * psi[0];
    g[0] += d0 * std::pow(std::abs(u0), p - 1.0) * u0;
    return g;
  };

  Eigen::VectorXd psi(f.size);
  for (int i = 0; i < f.size; ++i) psi[i] = eps0 * grid.K_inv[i + f.first] / d[i];
  Minimizer out;
  double E = energy(psi);
  bool converged = false;
  for (int it = 1; it <= 200 && !converged; ++it) {
    const Eigen::VectorXd F = gradient(psi);
    const double kappa = d0 * d0 * p * std::pow(std::abs(d0 * psi[0]), p - 1.0);
    const Eigen::VectorXd BF = Bs.solve(F);
    Eigen::VectorXd delta = -(BF - (kappa * BF[0] / (1.0 + kappa * w[0])) * w);
    if (delta.dot(F) >= 0.0) delta = -Ps.solve(F);
    double s = 1.0, E_new = energy(psi + delta);
    while (E_new > E && s > 1e-12) {
      s *= 0.5;
      E_new = energy(psi + s * delta);
    }
    const double step = s * delta.lpNorm<Eigen::Infinity>();
    if (E_new > E) {
      // No decrease along a descent direction: accept only if already stationary.
      if (step <= 1e-10 * psi.lpNorm<Eigen::Infinity>()) break;
      throw Error(ErrorKind::NoDescent, "minimize_J: line search failed");
    }
    psi += s * delta;
    E = E_new;
    out.iterations = it;
    converged = step <= 1e-13 * psi.lpNorm<Eigen::Infinity>();
  }
  out.phi = f.extend(d.asDiagonal() * psi, grid.n);
  if (out.phi.lpNorm<Eigen::Infinity>() < 1e-10)
    throw Error(ErrorKind::ConvergedToZero, "minimize_J: collapsed to the trivial critical point");
  if (out.phi[0] < 0) out.phi = -out.phi;
  out.value = functional_J(grid, out.phi, p);
  return out;
}

}  // namespace nlflux
