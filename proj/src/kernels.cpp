#include "nlflux/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace nlflux {
namespace {

// Value of a piecewise-linear density on the interior of [u, v], extended by
// continuity to the endpoints. Zero when [u, v] lies outside the support.
std::pair<double, double> segment_values(const PiecewiseLinear& pl, double u, double v) {
  const double lo = pl.nodes[0];
  const double hi = pl.nodes[pl.nodes.size() - 1];
  if (v <= lo || u >= hi) return {0.0, 0.0};
  return {interp_linear(pl.nodes, pl.values, u), interp_linear(pl.nodes, pl.values, v)};
}

double abs_linear_integral(double f0, double f1, double h) {
  if ((f0 >= 0) == (f1 >= 0)) return 0.5 * h * std::abs(f0 + f1);
  const double z = h * f0 / (f0 - f1);
  return 0.5 * (z * std::abs(f0) + (h - z) * std::abs(f1));
}

// 1/2 [erf(b) - erf(a)] for a <= b, evaluated through erfc in the tails.
double half_erf_difference(double a, double b) {
  if (a >= 0) return 0.5 * (std::erfc(a) - std::erfc(b));
  if (b <= 0) return 0.5 * (std::erfc(-b) - std::erfc(-a));
  return 0.5 * (std::erf(b) - std::erf(a));
}

// int_{y0}^{y1} E(t, y - c) (f0 + slope (y - y0)) dy.
double gaussian_linear_integral(double t, double c, double y0, double y1, double f0, double slope) {
  const double scale = 2.0 * std::sqrt(t);
  const double at_c = f0 + slope * (c - y0);
  const double zeroth = half_erf_difference((y0 - c) / scale, (y1 - c) / scale);
  const double first = -2.0 * t * (heat_kernel(t, y1 - c) - heat_kernel(t, y0 - c));
  return at_c * zeroth + slope * first;
}

// Antiderivatives in tau of E(tau, d) and tau E(tau, d), times two.
double antideriv_F(double tau, double d) {
  if (tau <= 0) return 0.0;
  const double z = d / (2.0 * std::sqrt(tau));
  return 2.0 * std::sqrt(tau / kPi) * std::exp(-z * z) - d * std::erfc(z);
}

double antideriv_H(double tau, double d) {
  if (tau <= 0) return 0.0;
  const double z = d / (2.0 * std::sqrt(tau));
  return 2.0 / (3.0 * kSqrtPi) * tau * std::sqrt(tau) * std::exp(-z * z) - d * d / 6.0 * antideriv_F(tau, d);
}

void check_query(const HeatBallQuery& q) {
  require(q.t > 0 && q.r > 0 && q.x >= 0, "heat ball query: need t > 0, r > 0, x >= 0");
  require(q.samples >= 10000, "heat ball query: at least 1e4 samples");
}

}  // namespace

double PiecewiseLinear::operator()(double s) const {
  if (nodes.size() == 0 || s < nodes[0] || s > nodes[nodes.size() - 1]) return 0.0;
  return interp_linear(nodes, values, s);
}

double PiecewiseLinear::integral() const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 1 < nodes.size(); ++i) sum += 0.5 * (nodes[i + 1] - nodes[i]) * (values[i] + values[i + 1]);
  return sum;
}

double PiecewiseLinear::integral_abs() const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 1 < nodes.size(); ++i)
    sum += abs_linear_integral(values[i], values[i + 1], nodes[i + 1] - nodes[i]);
  return sum;
}

MeasureData MeasureData::initial(std::vector<Atom> atoms, std::optional<PiecewiseLinear> density) {
  MeasureData m{MeasureDomain::Initial, std::move(atoms), std::move(density), INFINITY};
  m.validate();
  return m;
}

MeasureData MeasureData::boundary(double horizon, std::vector<Atom> atoms, std::optional<PiecewiseLinear> density) {
  MeasureData m{MeasureDomain::Boundary, std::move(atoms), std::move(density), horizon};
  m.validate();
  return m;
}

MeasureData MeasureData::dirac_at_origin(double horizon, double mass) {
  return boundary(horizon, {Atom{0.0, mass}});
}

void MeasureData::validate() const {
  const bool bdry = domain == MeasureDomain::Boundary;
  if (bdry) require(horizon > 0 && std::isfinite(horizon), "boundary measure: horizon must be positive and finite");
  for (const Atom& a : atoms) {
    require(std::isfinite(a.location) && std::isfinite(a.mass), "measure: non-finite atom");
    require(a.location >= 0, "measure: atom location must be nonnegative");
    if (bdry) require(a.location < horizon, "boundary measure: atom location must be below the horizon");
  }
  if (density) {
    const auto& d = *density;
    require(d.nodes.size() >= 2 && d.nodes.size() == d.values.size(), "density: need >= 2 matching nodes and values");
    require(d.nodes[0] >= 0, "density: nodes must be nonnegative");
    for (Eigen::Index i = 0; i + 1 < d.nodes.size(); ++i)
      require(d.nodes[i + 1] > d.nodes[i], "density: nodes must be strictly increasing");
    require(d.values.allFinite() && d.nodes.allFinite(), "density: non-finite entries");
    if (bdry) require(d.nodes[d.nodes.size() - 1] <= horizon * (1 + 1e-12), "boundary density: support beyond horizon");
  }
}

double MeasureData::total_variation() const {
  double tv = 0.0;
  for (const Atom& a : atoms) tv += std::abs(a.mass);
  if (density) tv += density->integral_abs();
  return tv;
}

double MeasureData::atom_mass_at_origin() const {
  double m = 0.0;
  for (const Atom& a : atoms)
    if (a.location == 0.0) m += a.mass;
  return m;
}

double difference_total_variation(const MeasureData& a, const MeasureData& b, double upto) {
  std::map<double, double> diff;
  for (const Atom& at : a.atoms)
    if (at.location < upto) diff[at.location] += at.mass;
  for (const Atom& at : b.atoms)
    if (at.location < upto) diff[at.location] -= at.mass;
  double tv = 0.0;
  for (const auto& [loc, m] : diff) tv += std::abs(m);

  std::vector<double> nodes;
  for (const MeasureData* m : {&a, &b})
    if (m->density)
      for (double s : m->density->nodes) nodes.push_back(std::min(s, upto));
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double u = nodes[i], v = nodes[i + 1];
    auto [fa0, fa1] = a.density ? segment_values(*a.density, u, v) : std::pair{0.0, 0.0};
    auto [fb0, fb1] = b.density ? segment_values(*b.density, u, v) : std::pair{0.0, 0.0};
    tv += abs_linear_integral(fa0 - fb0, fa1 - fb1, v - u);
  }
  return tv;
}

KernelMoments heat_kernel_moments(double t, double s0, double s1, double d) {
  require(s0 < s1 && s1 <= t * (1 + 1e-15), "heat_kernel_moments: need s0 < s1 <= t");
  d = std::abs(d);
  const double ta = t - s0;
  const double tb = std::max(0.0, t - s1);
  const double h = s1 - s0;
  if (d * d > 2900.0 * ta) return {};  // exp(-d^2/4ta) underflows
  if (d == 0.0) {
    const double sa = std::sqrt(ta), sb = std::sqrt(tb);
    const double dd = h / (sa + sb);  // sqrt(ta) - sqrt(tb), with ta - tb = h exactly
    const double c = 1.0 / (2.0 * kSqrtPi);
    return {2.0 * c * dd, c * (2.0 / 3.0) * dd * dd * (2.0 * sa + sb)};
  }
  // Far from the singularity the integrand barely varies; Gauss-Legendre is
  // exact to rounding and avoids cancellation in the closed form.
  if (tb > 0 && h * (0.5 / tb + d * d / (4.0 * tb * tb)) <= 0.2) {
    const GaussRule& rule = gauss_legendre(8);
    KernelMoments m;
    for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) {
      const double off = 0.5 * h * (1.0 + rule.nodes[k]);
      const double e = 0.5 * h * rule.weights[k] * heat_kernel(ta - off, d);
      m.m0 += e;
      m.m1 += e * off;
    }
    return m;
  }
  const double m0 = 0.5 * (antideriv_F(ta, d) - antideriv_F(tb, d));
  const double m1 = ta * m0 - 0.5 * (antideriv_H(ta, d) - antideriv_H(tb, d));
  return {m0, m1};
}

double gaussian_integral(const MeasureData& nu, double t, double c) {
  require(t > 0, "gaussian_integral: t must be positive");
  double v = 0.0;
  for (const Atom& a : nu.atoms) v += a.mass * heat_kernel(t, a.location - c);
  if (nu.density) {
    const auto& d = *nu.density;
    for (Eigen::Index i = 0; i + 1 < d.nodes.size(); ++i) {
      const double y0 = d.nodes[i], y1 = d.nodes[i + 1];
      const double slope = (d.values[i + 1] - d.values[i]) / (y1 - y0);
      v += gaussian_linear_integral(t, c, y0, y1, d.values[i], slope);
    }
  }
  return v;
}

double boundary_kernel_integral(const MeasureData& mu, double t, double d) {
  require(t > 0, "boundary_kernel_integral: t must be positive");
  double v = 0.0;
  for (const Atom& a : mu.atoms)
    if (a.location < t) v += a.mass * heat_kernel(t - a.location, d);
  if (mu.density) {
    const auto& f = *mu.density;
    for (Eigen::Index i = 0; i + 1 < f.nodes.size() && f.nodes[i] < t; ++i) {
      const double s0 = f.nodes[i];
      const double s1 = std::min(f.nodes[i + 1], t);
      const double slope = (f.values[i + 1] - f.values[i]) / (f.nodes[i + 1] - s0);
      const KernelMoments m = heat_kernel_moments(t, s0, s1, d);
      v += f.values[i] * m.m0 + slope * m.m1;
    }
  }
  return v;
}

double initial_part(const MeasureData& nu, double t, double x) {
  return gaussian_integral(nu, t, x) + gaussian_integral(nu, t, -x);
}

double boundary_part(const MeasureData& mu, double t, double x) { return 2.0 * boundary_kernel_integral(mu, t, x); }

double linear_solution(const MeasureData& nu, const MeasureData& mu, double t, double x) {
  require(x >= 0, "linear_solution: x must be nonnegative");
  if (mu.domain == MeasureDomain::Boundary)
    require(t <= mu.horizon * (1 + 1e-12), "linear_solution: t beyond the boundary horizon");
  return initial_part(nu, t, x) + boundary_part(mu, t, x);
}

double heat_ball_reference_bound(double r) { return 1.0 / (2.0 * r * r * r * std::pow(kPi * std::numbers::e, 1.5)); }

double boundary_heat_ball_reference_bound(double r) { return 1.0 / (4.0 * r * r * kPi * std::numbers::e); }

HeatBallEstimate heat_ball_measure(const HeatBallQuery& q) {
  check_query(q);
  // Etilde <= 2E(tau, x - y) <= (pi tau)^{-1/2} bounds tau; maximizing the
  // Gaussian level set over tau bounds |x - y|.
  const double tau_max = std::min(q.t, 1.0 / (kPi * q.r * q.r));
  const double reach = 2.0 / (q.r * std::sqrt(2.0 * kPi * std::numbers::e));
  const double y_lo = std::max(0.0, q.x - reach);
  const double y_hi = q.x + reach;
  const double area = tau_max * (y_hi - y_lo);
  const double ref_tau = 1.0 / (4.0 * kPi * std::numbers::e * q.r * q.r);
  const double ref_half = 1.0 / (q.r * std::sqrt(kPi * std::numbers::e));

  std::mt19937_64 rng(q.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::int64_t hits = 0, outside = 0;
  for (std::int64_t k = 0; k < q.samples; ++k) {
    const double tau = tau_max * (1.0 - unit(rng));  // (0, tau_max]
    const double y = y_lo + (y_hi - y_lo) * unit(rng);
    if (mirrored_kernel(tau, q.x, y) >= q.r) {
      ++hits;
      if (tau > ref_tau || std::abs(y - q.x) > ref_half) ++outside;
    }
  }
  const double n = static_cast<double>(q.samples);
  const double frac = hits / n;
  return {area * frac, area * std::sqrt(frac * (1 - frac) / n), area, area * outside / n, q.seed};
}

HeatBallEstimate boundary_heat_ball_measure(const HeatBallQuery& q) {
  check_query(q);
  const double tau_box = std::min(q.t, 1.0 / (2.0 * kPi * q.r * q.r));  // contains tau <= 1/(4 pi r^2)
  const double ref_tau = 1.0 / (4.0 * kPi * std::numbers::e * q.r * q.r);
  std::mt19937_64 rng(q.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::int64_t hits = 0, outside = 0;
  for (std::int64_t k = 0; k < q.samples; ++k) {
    const double tau = tau_box * (1.0 - unit(rng));
    if (heat_kernel(tau, 0.0) >= q.r) {
      ++hits;
      if (tau > ref_tau) ++outside;
    }
  }
  const double n = static_cast<double>(q.samples);
  const double frac = hits / n;
  return {tau_box * frac, tau_box * std::sqrt(frac * (1 - frac) / n), tau_box, tau_box * outside / n, q.seed};
}

double weak_norm(std::span<const std::pair<double, double>> samples, double q) {
  require(!samples.empty(), "weak_norm: empty sample set");
  require(q > 1, "weak_norm: q must exceed 1");
  std::vector<std::pair<double, double>> s;
  s.reserve(samples.size());
  for (auto [w, f] : samples) {
    require(w >= 0, "weak_norm: weights must be nonnegative");
    s.emplace_back(std::abs(f), w);
  }
  std::sort(s.begin(), s.end(), [](auto& a, auto& b) { return a.first > b.first; });
  double best = 0.0, measure = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    measure += s[i].second;
    if (i + 1 < s.size() && s[i + 1].first == s[i].first) continue;
    best = std::max(best, s[i].first * std::pow(measure, 1.0 / q));
  }
  return best;
}

}  // namespace nlflux
