#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>

namespace nlflux {

/// Uniform grid on [0, eta_inf] with the Gaussian weight K = e^{eta^2/4}.
struct WeightedGrid {
  double eta_inf = 12.0;
  int n = 2048;
  Eigen::VectorXd nodes;
  Eigen::VectorXd K;
  Eigen::VectorXd K_inv;

  WeightedGrid(double eta_inf = 12.0, int n = 2048);
  double spacing() const { return eta_inf / (n - 1); }
};

enum class BoundaryCondition { Neumann, Dirichlet };

/// Piecewise-linear forms a(phi, psi) = int phi' psi' K and m(phi, psi) = int phi psi K
/// restricted to the free nodes. The far node is always constrained; the node at
/// 0 is constrained for Dirichlet.
struct WeightedForms {
  Eigen::SparseMatrix<double> A;
  Eigen::SparseMatrix<double> M;
  int first = 0;  // grid index of the first free node
  int size = 0;

  /// Free-node coefficients of a grid function.
  Eigen::VectorXd restrict(const Eigen::VectorXd& grid_fn) const { return grid_fn.segment(first, size); }
  /// Grid function with zeros at constrained nodes.
  Eigen::VectorXd extend(const Eigen::VectorXd& coeffs, int n) const;
};

WeightedForms assemble_LK(const WeightedGrid& grid, BoundaryCondition bc);

/// M^{-1} A phi on the free nodes, returned as a grid function.
Eigen::VectorXd apply_LK(const WeightedForms& forms, const Eigen::VectorXd& grid_fn);

struct WeightedEigenResult {
  BoundaryCondition bc = BoundaryCondition::Neumann;
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // grid functions in columns, K-orthonormal
  WeightedGrid grid;
  int iterations = 0;
};

/// Smallest generalized eigenpairs of (a, m) by subspace iteration.
WeightedEigenResult eigen_smallest(const WeightedGrid& grid, BoundaryCondition bc, int count,
                                   std::uint64_t seed = 1);

/// (1/2) int (phi'^2 - phi^2 / (2(p-1))) K + |phi(0)|^{p+1} / (p+1), trapezoid rule.
double functional_J(const WeightedGrid& grid, const Eigen::VectorXd& phi, double p);

struct Minimizer {
  Eigen::VectorXd phi;
  double value = 0.0;
  int iterations = 0;
};

/// Damped Newton on the discrete Euler-Lagrange system from eps0 e^{-eta^2/4}.
Minimizer minimize_J(const WeightedGrid& grid, double p, double eps0 = 0.1);

}  // namespace nlflux
