#include "nlflux/fdm_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "nlflux/numerics.hpp"

namespace nlflux {
namespace {

double theta_of(TimeScheme s) { return s == TimeScheme::ImplicitEuler ? 1.0 : 0.5; }

void check_config(const FdmConfig& cfg, double T) {
  require(T > 0, "solve_fdm: T must be positive");
  require(cfg.nx >= 32 && cfg.nt >= 32, "solve_fdm: nx and nt must be at least 32");
  require(cfg.frame_stride >= 0, "solve_fdm: frame_stride must be nonnegative");
}

FieldSnapshot snapshot(double t, double x0, double h, const Eigen::VectorXd& u) {
  FieldSnapshot s{t, Eigen::VectorXd(u.size()), u};
  for (Eigen::Index i = 0; i < u.size(); ++i) s.xs[i] = x0 + h * static_cast<double>(i);
  return s;
}

}  // namespace

FdmResult solve_fdm(const FluxLaw& law, const Density& nu, const Density& mu, double T, const FdmConfig& cfg) {
  check_config(cfg, T);
  require(cfg.L >= 12.0 * std::sqrt(T), "solve_fdm: L must be at least 12 sqrt(T)");
  const int nx = cfg.nx, nt = cfg.nt;
  const double h = cfg.L / nx, dt = T / nt, th = theta_of(cfg.scheme);
  const double lam = dt / (h * h);

  // Unknowns u_0..u_{nx-1}; u_nx = 0.
  Eigen::VectorXd u(nx), un(nx), rhs(nx), P(nx), Q(nx);
  for (int i = 0; i < nx; ++i) u[i] = nu(i * h);

  auto op = [&](const Eigen::VectorXd& v, double t, int i) {
    const double right = i + 1 < nx ? v[i + 1] : 0.0;
    if (i == 0) return (2.0 * v[1] - 2.0 * v[0]) / (h * h) + 2.0 * (mu(t) - law.g(v[0])) / h;
    return (right - 2.0 * v[i] + v[i - 1]) / (h * h);
  };
  auto mass = [&](const Eigen::VectorXd& v) { return h * (v.sum() - 0.5 * v[0]); };
  auto balance = [&](const Eigen::VectorXd& v, double t) { return mu(t) - law.g(v[0]) - v[nx - 1] / h; };

  FdmResult res;
  res.times.resize(nt + 1);
  res.trace.resize(nt + 1);
  res.times[0] = 0.0;
  res.trace[0] = u[0];
  for (int n = 0; n < nt; ++n) {
    const double t0 = n * dt, t1 = (n + 1) * dt;
    un = u;
    for (int i = 0; i < nx; ++i) rhs[i] = u[i] + (1.0 - th) * dt * op(u, t0, i);
    rhs[0] += 2.0 * th * dt * mu(t1) / h;
    // Rows i >= 1: -th lam u_{i-1} + (1 + 2 th lam) u_i - th lam u_{i+1} = rhs_i.
    // Sweep upward from the Dirichlet end, u_i = P_i + Q_i u_{i-1}.
    const double off = -th * lam, dia = 1.0 + 2.0 * th * lam;
    P[nx - 1] = rhs[nx - 1] / dia;
    Q[nx - 1] = -off / dia;
    for (int i = nx - 2; i >= 1; --i) {
      const double den = dia + off * Q[i + 1];
      P[i] = (rhs[i] - off * P[i + 1]) / den;
      Q[i] = -off / den;
    }
    // Row 0: (1 + 2 th lam) u_0 - 2 th lam u_1 + 2 th dt / h g(u_0) = rhs_0.
    const double alpha = dia - 2.0 * th * lam * Q[1];
    const double r0 = (rhs[0] + 2.0 * th * lam * P[1]) / alpha;
    const double w = 2.0 * th * dt / (h * alpha);
    auto f = [&](double v) { return std::pair{v + w * law.g(v) - r0, 1.0 + w * law.dg(v)}; };
    u[0] = (r0 == 0.0) ? 0.0
                       : safeguarded_newton(f, std::min(0.0, r0), std::max(0.0, r0), 1e-13 * (1.0 + std::abs(r0)));
    for (int i = 1; i < nx; ++i) u[i] = P[i] + Q[i] * u[i - 1];

    const double dm = mass(u) - mass(un);
    const double flux = dt * (th * balance(u, t1) + (1.0 - th) * balance(un, t0));
    res.mass_balance_residual = std::max(res.mass_balance_residual, std::abs(dm - flux));
    res.times[n + 1] = t1;
    res.trace[n + 1] = u[0];
    if (cfg.frame_stride > 0 && (n + 1) % cfg.frame_stride == 0 && n + 1 < nt)
      res.frames.push_back(snapshot(t1, 0.0, h, u));
  }
  res.frames.push_back(snapshot(T, 0.0, h, u));
  return res;
}

FdmResult solve_fdm_interval(const FluxLaw& law, const Density& nu, const Density& mu_a, const Density& mu_b,
                             double a, double b, double T, const FdmConfig& cfg) {
  check_config(cfg, T);
  require(b > a, "solve_fdm_interval: need a < b");
  const int nx = cfg.nx, nt = cfg.nt, m = nx + 1;
  const double h = (b - a) / nx, dt = T / nt, th = theta_of(cfg.scheme);

  Eigen::VectorXd u(m), un(m), explicit_part(m), F(m), lower(m), diag(m), upper(m);
  for (int i = 0; i < m; ++i) u[i] = nu(a + i * h);

  auto op = [&](const Eigen::VectorXd& v, double t, int i) {
    if (i == 0) return (2.0 * v[1] - 2.0 * v[0]) / (h * h) + 2.0 * (mu_a(t) - law.g(v[0])) / h;
    if (i == nx) return (2.0 * v[nx - 1] - 2.0 * v[nx]) / (h * h) + 2.0 * (mu_b(t) - law.g(v[nx])) / h;
    return (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
  };
  auto mass = [&](const Eigen::VectorXd& v) { return h * (v.sum() - 0.5 * (v[0] + v[nx])); };
  auto balance = [&](const Eigen::VectorXd& v, double t) {
    return mu_a(t) - law.g(v[0]) + mu_b(t) - law.g(v[nx]);
  };

  FdmResult res;
  res.times.resize(nt + 1);
  res.trace.resize(nt + 1);
  res.trace_right.resize(nt + 1);
  res.times[0] = 0.0;
  res.trace[0] = u[0];
  res.trace_right[0] = u[nx];
  const double c = th * dt / (h * h);
  for (int n = 0; n < nt; ++n) {
    const double t0 = n * dt, t1 = (n + 1) * dt;
    un = u;
    for (int i = 0; i < m; ++i) explicit_part[i] = un[i] + (1.0 - th) * dt * op(un, t0, i);
    // Newton on F(u) = u - th dt L(u, t1) - explicit_part; tridiagonal Jacobian.
    bool converged = false;
    for (int it = 0; it < 100 && !converged; ++it) {
      for (int i = 0; i < m; ++i) {
        F[i] = u[i] - th * dt * op(u, t1, i) - explicit_part[i];
        diag[i] = 1.0 + 2.0 * c;
        lower[i] = upper[i] = -c;
      }
      upper[0] = lower[nx] = -2.0 * c;
      diag[0] += 2.0 * th * dt / h * law.dg(u[0]);
      diag[nx] += 2.0 * th * dt / h * law.dg(u[nx]);
      Eigen::VectorXd delta = -F;
      solve_tridiagonal(lower, diag, upper, delta);
      u += delta;
      converged = delta.lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + u.lpNorm<Eigen::Infinity>());
    }
    if (!converged) throw Error(ErrorKind::NewtonStall, "interval finite-difference step did not converge");

    const double dm = mass(u) - mass(un);
    const double flux = dt * (th * balance(u, t1) + (1.0 - th) * balance(un, t0));
    res.mass_balance_residual = std::max(res.mass_balance_residual, std::abs(dm - flux));
    res.times[n + 1] = t1;
    res.trace[n + 1] = u[0];
    res.trace_right[n + 1] = u[nx];
    if (cfg.frame_stride > 0 && (n + 1) % cfg.frame_stride == 0 && n + 1 < nt)
      res.frames.push_back(snapshot(t1, a, h, u));
  }
  res.frames.push_back(snapshot(T, a, h, u));
  return res;
}

}  // namespace nlflux
