#include "nlflux/flux_law.hpp"

#include <algorithm>
#include <vector>
#include <cmath>

#include "nlflux/error.hpp"
#include "nlflux/numerics.hpp"

namespace nlflux {

FluxLaw FluxLaw::power(double p) {
  require(std::isfinite(p) && p > 0, "FluxLaw::power: exponent must be positive");
  FluxLaw law;
  law.kind_ = Kind::Power;
  law.p_ = p;
  return law;
}

FluxLaw FluxLaw::tabulated(std::vector<std::pair<double, double>> breakpoints) {
  require(breakpoints.size() >= 2, "FluxLaw::tabulated: need at least two breakpoints");
  std::sort(breakpoints.begin(), breakpoints.end());
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    require(breakpoints[i + 1].first > breakpoints[i].first, "FluxLaw::tabulated: duplicate abscissa");
    if (breakpoints[i + 1].second < breakpoints[i].second)
      throw Error(ErrorKind::NonmonotoneLaw, "tabulated flux law must be nondecreasing");
  }
  // Locate or insert the origin; the interpolated value there must vanish.
  auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), std::pair<double, double>{0.0, -INFINITY});
  if (it == breakpoints.end() || it->first != 0.0) {
    require(it != breakpoints.begin() && it != breakpoints.end(),
            "FluxLaw::tabulated: breakpoints must bracket s = 0");
    const auto& [s0, g0] = *(it - 1);
    const auto& [s1, g1] = *it;
    const double g_at_zero = g0 + (g1 - g0) * (0.0 - s0) / (s1 - s0);
    const double scale = std::max({std::abs(g0), std::abs(g1), 1e-300});
    require(std::abs(g_at_zero) <= 1e-12 * scale, "FluxLaw::tabulated: g(0) must be 0");
    it = breakpoints.insert(it, {0.0, 0.0});
  }
  require(it->second == 0.0, "FluxLaw::tabulated: g(0) must be 0");

  FluxLaw law;
  law.kind_ = Kind::Tabulated;
  law.table_ = std::move(breakpoints);
  law.zero_index_ = static_cast<std::size_t>(it - law.table_.begin());
  const auto& t = law.table_;
  law.slope_left_ = (t[1].second - t[0].second) / (t[1].first - t[0].first);
  const std::size_t n = t.size();
  law.slope_right_ = (t[n - 1].second - t[n - 2].second) / (t[n - 1].first - t[n - 2].first);
  law.cumulative_.assign(n, 0.0);
  for (std::size_t i = law.zero_index_ + 1; i < n; ++i)
    law.cumulative_[i] = law.cumulative_[i - 1] + 0.5 * (t[i].second + t[i - 1].second) * (t[i].first - t[i - 1].first);
  for (std::size_t i = law.zero_index_; i-- > 0;)
    law.cumulative_[i] = law.cumulative_[i + 1] - 0.5 * (t[i].second + t[i + 1].second) * (t[i + 1].first - t[i].first);
  return law;
}

double FluxLaw::exponent() const {
  require(is_power(), "FluxLaw::exponent: law is not a power law");
  return p_;
}

double FluxLaw::g(double s) const {
  if (s == 0.0) return 0.0;
  if (kind_ == Kind::Power) return std::copysign(std::pow(std::abs(s), p_), s);
  const auto& t = table_;
  if (s <= t.front().first) return t.front().second + slope_left_ * (s - t.front().first);
  if (s >= t.back().first) return t.back().second + slope_right_ * (s - t.back().first);
  auto it = std::upper_bound(t.begin(), t.end(), s, [](double v, const auto& bp) { return v < bp.first; });
  const auto& [s1, g1] = *it;
  const auto& [s0, g0] = *(it - 1);
  return g0 + (g1 - g0) * (s - s0) / (s1 - s0);
}

double FluxLaw::dg(double s) const {
  if (kind_ == Kind::Power) return p_ * std::pow(std::abs(s), p_ - 1.0);
  const auto& t = table_;
  if (s < t.front().first) return slope_left_;
  if (s >= t.back().first) return slope_right_;
  auto it = std::upper_bound(t.begin(), t.end(), s, [](double v, const auto& bp) { return v < bp.first; });
  return (it->second - (it - 1)->second) / (it->first - (it - 1)->first);
}

double FluxLaw::G(double s) const {
  if (kind_ == Kind::Power) return std::pow(std::abs(s), p_ + 1.0) / (p_ + 1.0);
  const auto& t = table_;
  // Integrate the linear piece from the nearest breakpoint at or below s
  // (or the first breakpoint when s is left of the table).
  std::size_t i;
  if (s <= t.front().first) {
    i = 0;
  } else {
    auto it = std::upper_bound(t.begin(), t.end(), s, [](double v, const auto& bp) { return v < bp.first; });
    i = static_cast<std::size_t>(it - t.begin()) - 1;
  }
  const double gs = g(s);
  return cumulative_[i] + 0.5 * (t[i].second + gs) * (s - t[i].first);
}

double FluxLaw::growth_exponent() const {
  if (kind_ == Kind::Power) return p_;
  return (slope_left_ > 0 || slope_right_ > 0) ? 1.0 : 0.0;
}

AdmissibilityResult admissibility_integral(const FluxLaw& law, int n, const AdmissibilityOptions& opts) {
  require(n >= 1, "admissibility_integral: n must be >= 1");
  require(opts.s_max > 10.0, "admissibility_integral: s_max must exceed 10");
  const double exponent = (2.0 * n + 1.0) / n;
  auto integrand = [&](double s) { return (law.g(s) - law.g(-s)) * std::pow(s, -exponent); };

  AdmissibilityResult result;
  // Tail slope from the last decade below s_max.
  constexpr int kTailSamples = 21;
  std::vector<double> xs, ys;
  for (int i = 0; i < kTailSamples; ++i) {
    const double s = opts.s_max * std::pow(10.0, -1.0 + static_cast<double>(i) / (kTailSamples - 1));
    const double f = integrand(s);
    if (f > 0) xs.push_back(s), ys.push_back(f);
  }
  // g(s) - g(-s) is nondecreasing in s, so a vanishing integrand at s_max
  // means it vanishes on all of [1, s_max].
  if (integrand(opts.s_max) <= 0.0 || xs.size() < 3)
    result.tail_slope = -INFINITY;
  else
    result.tail_slope = loglog_slope(xs, ys);

  // Band edges are closed; the fit of an exact power carries round-off.
  constexpr double kEdge = 1e-9;
  if (result.tail_slope >= -1.0 + opts.slope_margin - kEdge) {
    result.finite = false;
    return result;
  }
  if (result.tail_slope > -1.0 - opts.slope_margin + kEdge)
    throw Error(ErrorKind::Inconclusive, "tail slope within the dead band around -1; raise s_max");

  // Body in log coordinates s = e^u, which flattens power-law integrands.
  auto body = adaptive_gauss_kronrod([&](double u) { const double s = std::exp(u); return integrand(s) * s; },
                                     0.0, std::log(opts.s_max), 0.0, opts.rel_tol);
  if (!body.converged) throw Error(ErrorKind::QuadratureFailure, "admissibility body quadrature");
  double tail = 0.0;
  if (std::isfinite(result.tail_slope))
    tail = integrand(opts.s_max) * opts.s_max / (-result.tail_slope - 1.0);
  result.finite = true;
  result.value = body.value + tail;
  return result;
}

}  // namespace nlflux
