#include "nlflux/trace_volterra.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nlflux/numerics.hpp"

namespace nlflux {
namespace {

// sum_k coef_k E(tau, offset_k)
struct ImageKernel {
  std::vector<std::pair<double, double>> terms;  // (offset >= 0, coefficient)

  void add(double offset, double coef) {
    offset = std::abs(offset);
    for (auto& [d, c] : terms)
      if (std::abs(d - offset) <= 1e-14 * std::max(1.0, offset)) {
        c += coef;
        return;
      }
    terms.emplace_back(offset, coef);
  }
};

double beta_function(double a, double b) { return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b); }

// int_{s0}^{min(s0 + h, t)} E(t - s, d) (h / (s - s0))^beta ds.
double singular_cell_integral(double t, double s0, double h, double d, double beta) {
  const double A = t - s0;
  if (A <= 0) return 0.0;
  const double c = 1.0 / (2.0 * kSqrtPi);
  if (d == 0.0) {
    if (A <= h * (1 + 1e-14)) return c * std::sqrt(A) * std::pow(h / A, beta) * beta_function(1 - beta, 0.5);
    const double z = h / A;
    if (z <= 0.5) {
      // (1 - z u)^{-1/2} = sum_k binom(2k, k) 4^{-k} (z u)^k
      double sum = 0.0, ck = 1.0, zk = 1.0;
      for (int k = 0; k < 200; ++k) {
        const double term = ck * zk / (k + 1 - beta);
        sum += term;
        if (term < 1e-17 * sum) break;
        ck *= (2.0 * k + 1) / (2.0 * k + 2);
        zk *= z;
      }
      return c * h / std::sqrt(A) * sum;
    }
  }
  // s - s0 = h v^{1/(1-beta)} absorbs the endpoint singularity.
  const double alpha = 1.0 / (1.0 - beta);
  const double v_end = std::pow(std::min(1.0, A / h), 1.0 - beta);
  auto f = [&](double v) {
    const double tau = A - h * std::pow(v, alpha);
    return tau > 0 ? heat_kernel(tau, d) : 0.0;
  };
  const QuadratureResult q = adaptive_gauss_kronrod(f, 0.0, v_end, 1e-15, 1e-11);
  return h * alpha * q.value;
}

struct CellWeights {
  double left = 0.0;
  double right = 0.0;
};

// Weights of the cell j model of g(U) against K(t - s), restricted to s <= t.
CellWeights cell_weights(const Eigen::VectorXd& nodes, int j, double t, const ImageKernel& K, bool singular,
                         double beta) {
  const double s0 = nodes[j - 1];
  const double h = nodes[j] - s0;
  const double s1 = std::min(nodes[j], t);
  CellWeights w;
  if (s1 <= s0) return w;
  for (const auto& [d, coef] : K.terms) {
    if (singular) {
      w.right += coef * singular_cell_integral(t, s0, h, d, beta);
    } else {
      const KernelMoments m = heat_kernel_moments(t, s0, s1, d);
      w.left += coef * (m.m0 - m.m1 / h);
      w.right += coef * m.m1 / h;
    }
  }
  return w;
}

// Solve U + w g(U) = b; the root lies between 0 and b.
double solve_scalar(const FluxLaw& law, double w, double b) {
  if (w == 0.0 || b == 0.0) return b;
  auto f = [&](double u) { return std::pair{u + w * law.g(u) - b, 1.0 + w * law.dg(u)}; };
  return safeguarded_newton(f, std::min(0.0, b), std::max(0.0, b), 1e-12 * (1.0 + std::abs(b)));
}

// Moves interior atoms onto grid nodes; returns the largest displacement.
double snap_atoms(MeasureData& mu, const GradedTimeGrid& grid, std::vector<int>& atom_nodes) {
  double dist = 0.0;
  for (Atom& a : mu.atoms) {
    if (a.mass == 0.0) continue;
    const int j = a.location == 0.0 ? 0 : grid.nearest_node(a.location);
    dist = std::max(dist, std::abs(grid[j] - a.location));
    a.location = grid[j];
    atom_nodes.push_back(j);
  }
  return dist;
}

void check_beta(double beta, bool any_singular) {
  if (any_singular && beta >= 1.0)
    throw Error(ErrorKind::InvalidArgument,
                "atoms in the data require g to grow slower than |s|^2 (admissibility fails)");
}

// Marches the scalar trace equation given forcing and kernel.
void march(TraceSolution& sol, const ImageKernel& K) {
  const Eigen::VectorXd& t = sol.grid.nodes();
  const int N = sol.grid.steps();
  for (int i = 1; i <= N; ++i) {
    double b = sol.forcing[i];
    for (int j = 1; j < i; ++j) {
      const CellWeights w = cell_weights(t, j, t[i], K, sol.singular_cell[j], sol.beta);
      b -= (sol.singular_cell[j] ? 0.0 : w.left * sol.gU[j - 1]) + w.right * sol.gU[j];
    }
    const CellWeights w = cell_weights(t, i, t[i], K, sol.singular_cell[i], sol.beta);
    if (!sol.singular_cell[i]) b -= w.left * sol.gU[i - 1];
    sol.U[i] = solve_scalar(sol.law, w.right, b);
    sol.gU[i] = sol.law.g(sol.U[i]);
  }
}

}  // namespace

GradedTimeGrid::GradedTimeGrid(double T, int N, double gamma) : T_(T), gamma_(gamma) {
  require(T > 0 && std::isfinite(T), "GradedTimeGrid: horizon must be positive");
  require(N >= 16, "GradedTimeGrid: need at least 16 steps");
  require(gamma >= 1, "GradedTimeGrid: grading exponent must be >= 1");
  nodes_.resize(N + 1);
  for (int j = 0; j <= N; ++j) nodes_[j] = T * std::pow(static_cast<double>(j) / N, gamma);
  nodes_[N] = T;
}

GradedTimeGrid GradedTimeGrid::with_geometric_head(double T, int N, double gamma, double t_min, double ratio) {
  GradedTimeGrid graded(T, N, gamma);
  require(ratio > 1 && ratio <= 2, "GradedTimeGrid: geometric ratio must lie in (1, 2]");
  require(t_min > 0 && t_min < graded[1], "GradedTimeGrid: t_min must lie below the first graded node");
  // First graded node from which successive ratios stay below `ratio`.
  int j0 = 1;
  while (j0 < N && graded[j0 + 1] / graded[j0] > ratio) ++j0;
  std::vector<double> head{0.0};
  const int cells = static_cast<int>(std::ceil(std::log(graded[j0] / t_min) / std::log(ratio)));
  const double q = std::pow(graded[j0] / t_min, 1.0 / cells);
  for (int k = 0; k < cells; ++k) head.push_back(t_min * std::pow(q, k));
  GradedTimeGrid g;
  g.T_ = T;
  g.gamma_ = gamma;
  g.t_min_ = t_min;
  g.nodes_.resize(static_cast<Eigen::Index>(head.size()) + N - j0 + 1);
  for (std::size_t k = 0; k < head.size(); ++k) g.nodes_[k] = head[k];
  g.nodes_.tail(N - j0 + 1) = graded.nodes_.tail(N - j0 + 1);
  return g;
}

double resolving_t_min(const FluxLaw& law, double mass, double tol) {
  require(mass > 0 && tol > 0, "resolving_t_min: mass and tolerance must be positive");
  const double q = law.growth_exponent();
  require(q < 2, "resolving_t_min: growth exponent must be below 2");
  const double log_t = 2.0 / (2.0 - q) * (std::log(tol) - (q - 1.0) * std::log(mass));
  return std::clamp(std::exp(std::max(log_t, std::log(1e-300))), 1e-300, 1e-6);
}

GradedTimeGrid GradedTimeGrid::rescaled(double k) const {
  require(k > 0, "GradedTimeGrid::rescaled: k must be positive");
  GradedTimeGrid g = *this;
  g.T_ = T_ / (k * k);
  g.t_min_ = t_min_ / (k * k);
  g.nodes_ = nodes_ / (k * k);
  return g;
}

int GradedTimeGrid::nearest_node(double s) const {
  const int N = steps();
  const double* first = nodes_.data();
  const double* it = std::lower_bound(first, first + N + 1, s);
  if (it == first) return 0;
  if (it == first + N + 1) return N;
  const int j = static_cast<int>(it - first);
  return (s - nodes_[j - 1] < nodes_[j] - s) ? j - 1 : j;
}

double TraceSolution::at(double t) const {
  const Eigen::VectorXd& nodes = grid.nodes();
  const int N = grid.steps();
  require(t >= nodes[1] * (1 - 1e-14) && t <= nodes[N] * (1 + 1e-14), "TraceSolution::at: t outside [t_1, T]");
  const MonotoneCubic interp(nodes.tail(N), U.tail(N));
  return interp(std::clamp(t, nodes[1], nodes[N]));
}

TraceSolution solve_trace(const FluxLaw& law, const MeasureData& nu, const MeasureData& mu,
                          const GradedTimeGrid& grid) {
  nu.validate();
  mu.validate();
  require(nu.domain == MeasureDomain::Initial, "solve_trace: nu must be an initial measure");
  require(mu.domain == MeasureDomain::Boundary, "solve_trace: mu must be a boundary measure");
  require(mu.horizon >= grid.horizon() * (1 - 1e-12), "solve_trace: boundary data shorter than the grid");

  const int N = grid.steps();
  TraceSolution sol{grid, law, nu, mu};
  std::vector<int> atom_nodes;
  sol.snap_distance = snap_atoms(sol.mu, grid, atom_nodes);
  sol.singular_cell.assign(N + 1, false);
  for (int j : atom_nodes)
    if (j < N) sol.singular_cell[j + 1] = true;
  if (nu.atom_mass_at_origin() != 0.0) sol.singular_cell[1] = true;
  sol.beta = 0.5 * law.growth_exponent();
  check_beta(sol.beta, std::find(sol.singular_cell.begin(), sol.singular_cell.end(), true) != sol.singular_cell.end());

  sol.U = Eigen::VectorXd::Constant(N + 1, NAN);
  sol.gU = Eigen::VectorXd::Constant(N + 1, NAN);
  sol.forcing = Eigen::VectorXd::Constant(N + 1, NAN);
  if (!sol.singular_cell[1]) {
    sol.U[0] = nu.density_at(0.0);
    sol.gU[0] = law.g(sol.U[0]);
  }
  for (int i = 1; i <= N; ++i) sol.forcing[i] = linear_solution(nu, sol.mu, grid[i], 0.0);

  ImageKernel K;
  K.add(0.0, 2.0);
  march(sol, K);
  return sol;
}

double flux_potential(const TraceSolution& sol, double t, double x) {
  const Eigen::VectorXd& nodes = sol.grid.nodes();
  ImageKernel K;
  K.add(x, 2.0);
  double v = 0.0;
  for (int j = 1; j <= sol.grid.steps() && nodes[j - 1] < t; ++j) {
    const CellWeights w = cell_weights(nodes, j, t, K, sol.singular_cell[j], sol.beta);
    v += (sol.singular_cell[j] ? 0.0 : w.left * sol.gU[j - 1]) + w.right * sol.gU[j];
  }
  return v;
}

FieldSnapshot reconstruct_field(const TraceSolution& sol, double t, const Eigen::VectorXd& xs) {
  require(!sol.interval, "reconstruct_field: interval traces are not supported");
  require(t > 0 && t <= sol.grid.horizon() * (1 + 1e-12), "reconstruct_field: t outside (0, T]");
  FieldSnapshot snap{t, xs, Eigen::VectorXd(xs.size())};
  for (Eigen::Index k = 0; k < xs.size(); ++k) {
    require(xs[k] >= 0, "reconstruct_field: x must be nonnegative");
    snap.u[k] = linear_solution(sol.nu, sol.mu, t, xs[k]) - flux_potential(sol, t, xs[k]);
  }
  return snap;
}

TraceSolution scale_solution(const TraceSolution& sol, double k) {
  require(sol.law.is_power(), "scale_solution: needs a power law");
  require(!sol.interval, "scale_solution: interval traces are not supported");
  require(k > 0 && std::isfinite(k), "scale_solution: k must be positive");
  const double p = sol.law.exponent();
  const double a = 1.0 / (p - 1.0);
  const double atom_factor = std::pow(k, (2.0 - p) / (p - 1.0));

  TraceSolution out = sol;
  out.grid = sol.grid.rescaled(k);
  out.U = std::pow(k, a) * sol.U;
  out.forcing = std::pow(k, a) * sol.forcing;
  for (Eigen::Index j = 0; j < out.U.size(); ++j) out.gU[j] = std::isnan(out.U[j]) ? NAN : out.law.g(out.U[j]);
  out.snap_distance = sol.snap_distance / (k * k);

  for (Atom& at : out.nu.atoms) at = {at.location / k, at.mass * atom_factor};
  if (out.nu.density) {
    out.nu.density->nodes /= k;
    out.nu.density->values *= std::pow(k, a);
  }
  out.mu.horizon = sol.mu.horizon / (k * k);
  for (Atom& at : out.mu.atoms) at = {at.location / (k * k), at.mass * atom_factor};
  if (out.mu.density) {
    out.mu.density->nodes /= k * k;
    out.mu.density->values *= std::pow(k, p * a);
  }
  return out;
}

double image_tail_bound(double length, double T, int images) {
  require(length > 0 && T > 0 && images >= 0, "image_tail_bound: invalid arguments");
  // Each dropped term is E(tau, d) with |d| >= (2m - 1) L; maximize over tau <= T.
  double sum = 0.0;
  for (int m = images + 1; m <= images + 200; ++m) {
    const double d = (2.0 * m - 1.0) * length;
    const double tau = std::min(T, 0.5 * d * d);
    sum += 4.0 * heat_kernel(tau, d);
  }
  return sum;
}

IntervalTraces solve_interval_trace(const FluxLaw& law, const MeasureData& nu, const MeasureData& mu_a,
                                    const MeasureData& mu_b, double a, double b, const GradedTimeGrid& grid,
                                    int images) {
  require(b > a && a >= 0, "solve_interval_trace: need 0 <= a < b");
  require(images >= 3, "solve_interval_trace: need at least 3 images");
  nu.validate();
  mu_a.validate();
  mu_b.validate();
  require(nu.domain == MeasureDomain::Initial, "solve_interval_trace: nu must be an initial measure");
  for (const MeasureData* m : {&mu_a, &mu_b}) {
    require(m->domain == MeasureDomain::Boundary, "solve_interval_trace: flux data must be boundary measures");
    require(m->horizon >= grid.horizon() * (1 - 1e-12), "solve_interval_trace: flux data shorter than the grid");
  }
  for (const Atom& at : nu.atoms)
    require(at.location >= a && at.location <= b, "solve_interval_trace: initial atoms must lie in [a, b]");
  if (nu.density)
    require(nu.density->nodes[0] >= a && nu.density->nodes[nu.density->nodes.size() - 1] <= b,
            "solve_interval_trace: initial density must live on [a, b]");

  const double L = b - a;
  const double tail = image_tail_bound(L, grid.horizon(), images);
  if (tail > 1e-8) throw Error(ErrorKind::ImageSeriesTooShort, "image tail bound " + std::to_string(tail));

  // Theta(tau, x, y) = sum_m E(tau, x - y - 2mL) + E(tau, x + y - 2a - 2mL).
  ImageKernel Kaa, Kab, Kba, Kbb;
  std::vector<double> centers_a, centers_b;
  for (int m = -images; m <= images; ++m) {
    const double s = 2.0 * m * L;
    Kaa.add(-s, 1.0), Kaa.add(-s, 1.0);
    Kab.add(-L - s, 1.0), Kab.add(L - s, 1.0);
    Kba.add(L - s, 1.0), Kba.add(L - s, 1.0);
    Kbb.add(-s, 1.0), Kbb.add(2.0 * L - s, 1.0);
    centers_a.push_back(a - s), centers_a.push_back(a + s);
    centers_b.push_back(b - s), centers_b.push_back(2.0 * a + s - b);
  }

  const int N = grid.steps();
  IntervalTraces out{TraceSolution{grid, law, nu, mu_a}, TraceSolution{grid, law, nu, mu_b}, tail};
  TraceSolution& A = out.at_a;
  TraceSolution& B = out.at_b;
  A.interval = B.interval = std::pair{a, b};
  A.beta = B.beta = 0.5 * law.growth_exponent();
  bool any_singular = false;
  for (auto [sol, x] : {std::pair{&A, a}, std::pair{&B, b}}) {
    std::vector<int> atom_nodes;
    sol->snap_distance = snap_atoms(sol->mu, grid, atom_nodes);
    sol->singular_cell.assign(N + 1, false);
    for (int j : atom_nodes)
      if (j < N) sol->singular_cell[j + 1] = true;
    for (const Atom& at : nu.atoms)
      if (at.location == x && at.mass != 0.0) sol->singular_cell[1] = true;
    sol->U = Eigen::VectorXd::Constant(N + 1, NAN);
    sol->gU = Eigen::VectorXd::Constant(N + 1, NAN);
    sol->forcing = Eigen::VectorXd::Constant(N + 1, NAN);
    if (!sol->singular_cell[1]) {
      sol->U[0] = nu.density_at(x);
      sol->gU[0] = law.g(sol->U[0]);
    }
    for (bool s : sol->singular_cell) any_singular = any_singular || s;
  }
  check_beta(A.beta, any_singular);

  auto boundary_terms = [](const MeasureData& m, double t, const ImageKernel& K) {
    double v = 0.0;
    for (const auto& [d, c] : K.terms) v += c * boundary_kernel_integral(m, t, d);
    return v;
  };
  for (int i = 1; i <= N; ++i) {
    const double t = grid[i];
    double fa = boundary_terms(A.mu, t, Kaa) + boundary_terms(B.mu, t, Kab);
    double fb = boundary_terms(A.mu, t, Kba) + boundary_terms(B.mu, t, Kbb);
    for (double c : centers_a) fa += gaussian_integral(nu, t, c);
    for (double c : centers_b) fb += gaussian_integral(nu, t, c);
    A.forcing[i] = fa;
    B.forcing[i] = fb;
  }

  const Eigen::VectorXd& t = grid.nodes();
  auto history = [&](const TraceSolution& src, int j, double ti, const ImageKernel& K, bool current) {
    const CellWeights w = cell_weights(t, j, ti, K, src.singular_cell[j], src.beta);
    const double left = src.singular_cell[j] ? 0.0 : w.left * src.gU[j - 1];
    return current ? std::pair{left, w.right} : std::pair{left + w.right * src.gU[j], 0.0};
  };
  for (int i = 1; i <= N; ++i) {
    double ba = A.forcing[i], bb = B.forcing[i];
    for (int j = 1; j < i; ++j) {
      ba -= history(A, j, t[i], Kaa, false).first + history(B, j, t[i], Kab, false).first;
      bb -= history(A, j, t[i], Kba, false).first + history(B, j, t[i], Kbb, false).first;
    }
    const auto [laa, waa] = history(A, i, t[i], Kaa, true);
    const auto [lab, wab] = history(B, i, t[i], Kab, true);
    const auto [lba, wba] = history(A, i, t[i], Kba, true);
    const auto [lbb, wbb] = history(B, i, t[i], Kbb, true);
    ba -= laa + lab;
    bb -= lba + lbb;
    // Nonlinear Gauss-Seidel; the cross weights are exponentially small.
    double ua = solve_scalar(law, waa, ba), ub = solve_scalar(law, wbb, bb);
    bool converged = false;
    for (int it = 0; it < 200 && !converged; ++it) {
      const double ua_new = solve_scalar(law, waa, ba - wab * law.g(ub));
      const double ub_new = solve_scalar(law, wbb, bb - wba * law.g(ua_new));
      converged = std::abs(ua_new - ua) <= 1e-13 * (1 + std::abs(ua)) &&
                  std::abs(ub_new - ub) <= 1e-13 * (1 + std::abs(ub));
      ua = ua_new, ub = ub_new;
    }
    if (!converged) throw Error(ErrorKind::NewtonStall, "interval coupling did not converge");
    A.U[i] = ua, B.U[i] = ub;
    A.gU[i] = law.g(ua), B.gU[i] = law.g(ub);
  }
  return out;
}

}  // namespace nlflux
