#include "nlflux/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "nlflux/numerics.hpp"

namespace nlflux {
namespace {

// Sorted unique values of v inside [lo, hi].
std::vector<double> unique_sorted(std::vector<double> v, double lo, double hi) {
  std::erase_if(v, [&](double x) { return x < lo || x > hi; });
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) <= 1e-14 * (1 + std::abs(b)); }),
          v.end());
  return v;
}

// Gauss points and weights over consecutive panels.
void panel_rule(const std::vector<double>& edges, int order, std::vector<double>& x, std::vector<double>& w) {
  const GaussRule& rule = gauss_legendre(order);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double half = 0.5 * (edges[i + 1] - edges[i]), mid = 0.5 * (edges[i + 1] + edges[i]);
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
      x.push_back(mid + half * rule.nodes[q]);
      w.push_back(half * rule.weights[q]);
    }
  }
}

double support_radius(const MeasureData& nu) {
  double r = 0.0;
  for (const Atom& a : nu.atoms) r = std::max(r, a.location);
  if (nu.density) r = std::max(r, nu.density->nodes[nu.density->nodes.size() - 1]);
  return r;
}

// int f dm over a measure with f sampled at atoms and by Gauss rules on density segments.
template <typename F>
double integrate_against(const MeasureData& m, F&& f, double upto = INFINITY) {
  double v = 0.0;
  for (const Atom& a : m.atoms)
    if (a.location < upto) v += a.mass * f(a.location);
  if (m.density) {
    const auto& d = *m.density;
    for (Eigen::Index i = 0; i + 1 < d.nodes.size() && d.nodes[i] < upto; ++i) {
      const double s0 = d.nodes[i], s1 = std::min(d.nodes[i + 1], upto);
      v += gauss_integrate([&](double s) { return (*m.density)(s) * f(s); }, s0, s1, 8);
    }
  }
  return v;
}

// int theta(s) g(U(s)) ds for the piecewise model of g(U) used by the solver.
template <typename F>
double integrate_flux_model(const TraceSolution& sol, F&& theta) {
  const Eigen::VectorXd& t = sol.grid.nodes();
  double v = 0.0;
  for (int j = 1; j <= sol.grid.steps(); ++j) {
    const double s0 = t[j - 1], h = t[j] - s0;
    if (sol.singular_cell[j]) {
      const double alpha = 1.0 / (1.0 - sol.beta);
      v += sol.gU[j] * h * alpha *
           gauss_integrate([&](double q) { return theta(s0 + h * std::pow(q, alpha)); }, 0.0, 1.0, 16);
    } else {
      v += gauss_integrate(
          [&](double s) { return theta(s) * (sol.gU[j - 1] + (sol.gU[j] - sol.gU[j - 1]) * (s - s0) / h); }, s0,
          t[j], 4);
    }
  }
  return v;
}

}  // namespace

double TestFunction::theta(double t) const {
  const double s = t / T;
  return amplitude * std::pow(1.0 - s, m) * (1.0 + c * s);
}

double TestFunction::theta_prime(double t) const {
  const double s = t / T;
  return amplitude / T * (-m * std::pow(1.0 - s, m - 1) * (1.0 + c * s) + c * std::pow(1.0 - s, m));
}

TestFunction TestFunction::random(double T, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TestFunction z;
  z.T = T;
  z.sigma = 0.5 + 3.5 * unit(rng);
  z.m = 2 + static_cast<int>(unit(rng) * 2.0);
  z.c = 2.0 * unit(rng);
  return z;
}

std::vector<WeakResidualTerms> weak_residuals(const TraceSolution& sol, const std::vector<TestFunction>& zetas,
                                              const WeakResidualOptions& opts) {
  require(!sol.interval, "weak_residuals: half-line traces only");
  require(opts.time_panels >= 4 && opts.space_points >= 2 && opts.panel_width > 0, "weak_residuals: bad options");
  const double T = sol.grid.horizon();
  double sigma_max = 0.0;
  for (const TestFunction& z : zetas) {
    require(std::abs(z.T - T) <= 1e-12 * T && z.sigma > 0 && z.m >= 1, "weak_residuals: test function mismatch");
    sigma_max = std::max(sigma_max, z.sigma);
  }
  std::vector<WeakResidualTerms> out(zetas.size());
  if (zetas.empty()) return out;

  // Time quadrature on graded panels, refined after interior flux atoms.
  std::vector<double> tedges;
  for (int k = 0; k <= opts.time_panels; ++k) tedges.push_back(T * std::pow(double(k) / opts.time_panels, 2));
  for (const Atom& a : sol.mu.atoms)
    if (a.location > 0 && a.location < T)
      for (int k = 0; k <= opts.time_panels; ++k)
        tedges.push_back(a.location + (T - a.location) * std::pow(double(k) / opts.time_panels, 2));
  tedges = unique_sorted(tedges, 0.0, T);
  std::vector<double> tq, tw;
  panel_rule(tedges, 4, tq, tw);

  const double xmax = std::sqrt(40.0 * sigma_max) + support_radius(sol.nu);
  const double width = opts.panel_width * std::sqrt(sigma_max);
  std::vector<double> bulk(zetas.size(), 0.0);
  for (std::size_t q = 0; q < tq.size(); ++q) {
    const double t = tq[q], rt = std::sqrt(t);
    std::vector<double> xe;
    for (double x = 0.0; x < xmax; x += width) xe.push_back(x);
    xe.push_back(xmax);
    for (int j = -4; j <= 6; ++j) xe.push_back(rt * std::ldexp(1.0, j));
    for (const Atom& a : sol.nu.atoms)
      for (int j = -4; j <= 6; ++j) xe.push_back(a.location - rt * std::ldexp(1.0, j)), xe.push_back(a.location + rt * std::ldexp(1.0, j));
    for (const Atom& a : sol.mu.atoms)
      if (a.location > 0 && a.location < t)
        for (int j = -4; j <= 6; ++j) xe.push_back(std::sqrt(t - a.location) * std::ldexp(1.0, j));
    xe = unique_sorted(xe, 0.0, xmax);
    std::vector<double> xq, xw;
    panel_rule(xe, opts.space_points, xq, xw);
    const FieldSnapshot snap = reconstruct_field(sol, t, Eigen::Map<const Eigen::VectorXd>(xq.data(), xq.size()));
    for (std::size_t k = 0; k < zetas.size(); ++k) {
      const TestFunction& z = zetas[k];
      const double th = z.theta(t), dth = z.theta_prime(t);
      double inner = 0.0;
      for (std::size_t i = 0; i < xq.size(); ++i) inner += xw[i] * (dth * z.psi(xq[i]) + th * z.psi_second(xq[i])) * snap.u[i];
      bulk[k] -= tw[q] * inner;
    }
  }

  for (std::size_t k = 0; k < zetas.size(); ++k) {
    const TestFunction& z = zetas[k];
    WeakResidualTerms& r = out[k];
    r.bulk = bulk[k];
    r.boundary = z.psi(0.0) * integrate_flux_model(sol, [&](double s) { return z.theta(s); });
    r.initial = z.theta(0.0) * integrate_against(sol.nu, [&](double x) { return z.psi(x); });
    r.flux = z.psi(0.0) * integrate_against(sol.mu, [&](double s) { return z.theta(s); }, T);
    const double scale = std::max({std::abs(r.bulk), std::abs(r.boundary), std::abs(r.initial), std::abs(r.flux)});
    r.residual = scale == 0.0 ? 0.0 : std::abs(r.bulk + r.boundary - r.initial - r.flux) / scale;
  }
  return out;
}

WeakResidualTerms weak_residual(const TraceSolution& sol, const TestFunction& zeta, const WeakResidualOptions& opts) {
  return weak_residuals(sol, {zeta}, opts).front();
}

ContractionResult contraction_check(const FluxLaw& law, const MeasureData& nu, const MeasureData& mu,
                                    const MeasureData& nu2, const MeasureData& mu2, double t,
                                    const GradedTimeGrid& grid, double slack) {
  require(t > 0 && t <= grid.horizon() * (1 + 1e-12), "contraction_check: t outside (0, T]");
  const TraceSolution a = solve_trace(law, nu, mu, grid);
  const TraceSolution b = solve_trace(law, nu2, mu2, grid);
  const double R = std::max(support_radius(nu), support_radius(nu2)) + 12.0 * std::sqrt(t);
  const double width = 0.05 * std::min(1.0, std::sqrt(t));
  std::vector<double> xe;
  for (double x = 0.0; x < R; x += width) xe.push_back(x);
  xe.push_back(R);
  std::vector<double> xq, xw;
  panel_rule(xe, 4, xq, xw);
  const Eigen::Map<const Eigen::VectorXd> xs(xq.data(), xq.size());
  const FieldSnapshot ua = reconstruct_field(a, t, xs), ub = reconstruct_field(b, t, xs);
  ContractionResult r;
  for (std::size_t i = 0; i < xq.size(); ++i) r.lhs += xw[i] * std::abs(ua.u[i] - ub.u[i]);
  r.rhs = difference_total_variation(nu, nu2) + difference_total_variation(mu, mu2, t);
  r.pass = r.lhs <= r.rhs * (1.0 + slack);
  return r;
}

double heat_ball_constant() {
  // 4 (4 pi)^{-3/2} int_0^1 sqrt(-s ln s / 2) ds
  return 4.0 / std::pow(4.0 * kPi, 1.5) / std::sqrt(2.0) * std::tgamma(1.5) / std::pow(1.5, 1.5);
}

double trace_quasinorm_constant() { return 2.0 / kSqrtPi; }

double field_quasinorm_constant() { return std::pow(2.0, 2.0 / 3.0) * 1.5 * std::cbrt(heat_ball_constant()); }

MarcinkiewiczResult marcinkiewicz_check(const MeasureData& nu, const MeasureData& mu,
                                        const MarcinkiewiczOptions& opts) {
  require(opts.T > 0 && opts.time_cells >= 16 && opts.space_cells >= 16, "marcinkiewicz_check: bad options");
  require(mu.domain == MeasureDomain::Boundary && mu.horizon >= opts.T * (1 - 1e-12),
          "marcinkiewicz_check: boundary data shorter than T");
  const double T = opts.T;
  // Times where the linear solution is singular at the boundary.
  std::vector<double> sources{0.0};
  for (const Atom& a : mu.atoms)
    if (a.location > 0 && a.location < T) sources.push_back(a.location);
  std::vector<double> times;
  for (double s : sources)
    for (int k = 0; k <= opts.time_cells; ++k) times.push_back(s + (T - s) * std::pow(double(k) / opts.time_cells, 2));
  times = unique_sorted(times, 0.0, T);
  auto is_source = [&](double t) {
    return std::any_of(sources.begin(), sources.end(), [&](double s) { return std::abs(s - t) <= 1e-14 * (1 + s); });
  };

  std::vector<std::pair<double, double>> trace_samples, field_samples;
  const double R = support_radius(nu);
  for (std::size_t j = 1; j < times.size(); ++j) {
    const double t0 = times[j - 1], t1 = times[j], dt = t1 - t0;
    const bool skip_left = is_source(t0);
    const double v1 = std::abs(linear_solution(nu, mu, t1, 0.0));
    const double v0 = skip_left ? INFINITY : std::abs(linear_solution(nu, mu, t0, 0.0));
    trace_samples.emplace_back(dt, std::min(v0, v1));

    const double rt = std::sqrt(t1), X = R + 12.0 * rt;
    std::vector<double> xs;
    for (int k = 0; k <= opts.space_cells; ++k) xs.push_back(X * k / opts.space_cells);
    for (double step = 0.25; step <= 6.0; step += 0.25) {
      for (const Atom& a : nu.atoms) xs.push_back(a.location - rt * step), xs.push_back(a.location + rt * step);
      for (double s : sources)
        if (s < t1) xs.push_back(std::sqrt(t1 - s) * step);
    }
    xs = unique_sorted(xs, 0.0, X);
    std::vector<double> f1(xs.size()), f0(xs.size(), INFINITY);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      f1[k] = std::abs(linear_solution(nu, mu, t1, xs[k]));
      if (!skip_left) f0[k] = std::abs(linear_solution(nu, mu, t0, xs[k]));
    }
    for (std::size_t k = 1; k < xs.size(); ++k)
      field_samples.emplace_back(dt * (xs[k] - xs[k - 1]), std::min({f1[k - 1], f1[k], f0[k - 1], f0[k]}));
  }
  MarcinkiewiczResult r;
  r.trace_weak2 = weak_norm(trace_samples, 2.0);
  r.field_weak3 = weak_norm(field_samples, 3.0);
  MeasureData mu_T = mu;
  std::erase_if(mu_T.atoms, [&](const Atom& a) { return a.location >= T; });
  r.total_variation = nu.total_variation() + difference_total_variation(mu_T, MeasureData::boundary(mu.horizon), T);
  r.trace_ratio = r.trace_weak2 / r.total_variation;
  r.field_ratio = r.field_weak3 / r.total_variation;
  return r;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Converging: return "converging";
    case Classification::Diverging: return "diverging";
    case Classification::Unclassifiable: return "unclassifiable";
  }
  return "?";
}

DichotomyReport dichotomy_sweep(double p, const std::vector<double>& ladder, const GradedTimeGrid& grid, int workers) {
  require(ladder.size() >= 8, "dichotomy_sweep: ladder needs at least 8 rungs");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    require(ladder[i] > 0, "dichotomy_sweep: masses must be positive");
    if (i > 0) require(std::abs(ladder[i] / ladder[i - 1] - 2.0) < 1e-12, "dichotomy_sweep: ladder must double");
  }
  require(grid.horizon() >= 1.0, "dichotomy_sweep: grid must reach t = 1");
  const FluxLaw law = FluxLaw::power(p);
  const std::size_t n = ladder.size();

  DichotomyReport rep;
  rep.p = p;
  rep.ladder = ladder;
  rep.rescaled_trace.assign(n, NAN);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        const TraceSolution sol =
            solve_trace(law, MeasureData::initial(), MeasureData::dirac_at_origin(grid.horizon(), ladder[i]), grid);
        rep.rescaled_trace[i] = sol.at(1.0);  // t^{1/(2(p-1))} = 1 at t = 1
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int k = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int w = 1; w < k; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  const std::vector<double>& v = rep.rescaled_trace;
  rep.monotone = true;
  for (std::size_t i = 1; i < n; ++i) rep.monotone = rep.monotone && v[i] >= v[i - 1];
  rep.cauchy_ratios.assign(n, NAN);
  bool shrinking = true;
  for (std::size_t i = 2; i < n; ++i) {
    rep.cauchy_ratios[i] = (v[i] - v[i - 1]) / (v[i - 1] - v[i - 2]);
    // Both classifiers look at the last three rungs; early rungs are pre-asymptotic.
    if (i >= n - 3)
      shrinking = shrinking && std::isfinite(rep.cauchy_ratios[i]) && std::abs(rep.cauchy_ratios[i]) < rep.cauchy_threshold;
  }
  rep.last_growth = INFINITY;
  for (std::size_t i = n - 3; i < n; ++i) rep.last_growth = std::min(rep.last_growth, v[i] / v[i - 1]);

  if (rep.last_growth >= rep.growth_threshold) {
    rep.classification = Classification::Diverging;
  } else if (shrinking) {
    rep.classification = Classification::Converging;
    const double r = rep.cauchy_ratios[n - 1];
    rep.limit = v[n - 1] + (v[n - 1] - v[n - 2]) * r / (1.0 - r);
  }
  return rep;
}

double scaling_identity_check(double p, double ell, double k, const GradedTimeGrid& grid) {
  require(ell > 0 && k > 0, "scaling_identity_check: ell and k must be positive");
  const FluxLaw law = FluxLaw::power(p);
  const double T = grid.horizon();
  const TraceSolution base = solve_trace(law, MeasureData::initial(), MeasureData::dirac_at_origin(T, ell), grid);
  const TraceSolution lhs = scale_solution(base, k);
  const double ell2 = std::pow(k, (2.0 - p) / (p - 1.0)) * ell;
  const TraceSolution rhs = solve_trace(law, MeasureData::initial(), MeasureData::dirac_at_origin(T, ell2), grid);
  const double lo = lhs.grid[1], hi = std::min(T, lhs.grid.horizon());
  const MonotoneCubic interp(lhs.grid.nodes().tail(grid.steps()), lhs.U.tail(grid.steps()));
  double err = 0.0;
  for (int j = 1; j <= grid.steps(); ++j) {
    const double t = grid[j];
    if (t < lo * (1 - 1e-14) || t > hi * (1 + 1e-14)) continue;
    err = std::max(err, std::abs(interp(std::clamp(t, lo, hi)) - rhs.U[j]) / std::abs(rhs.U[j]));
  }
  return err;
}

double apriori_shape_constant(const SelfSimilarProfile& profile) {
  require(profile.exists, "apriori_shape_constant: profile has no matching constant");
  const double a = 1.0 / (2.0 * (profile.p - 1.0));
  // U_s(t, x) (x^2 + t)^a = omega(eta) (1 + eta^2)^a depends on eta = x / sqrt(t) only
  double sup = 0.0;
  for (Eigen::Index i = 0; i < profile.eta.size(); ++i)
    sup = std::max(sup, profile.omega[i] * std::pow(1.0 + profile.eta[i] * profile.eta[i], a));
  return sup;
}

}  // namespace nlflux
