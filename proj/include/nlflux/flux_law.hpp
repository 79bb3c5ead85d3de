#pragma once

#include <utility>
#include <vector>

namespace nlflux {

/// Nondecreasing boundary nonlinearity g with g(0) = 0, together with its
/// antiderivative G(s) = int_0^s g.
///
/// Two kinds are supported: the odd power |s|^{p-1} s, and a tabulated
/// monotone table that is interpolated linearly and extended linearly past its
/// first and last breakpoints.
class FluxLaw {
 public:
  enum class Kind { Power, Tabulated };

  static FluxLaw power(double p);
  /// Throws NonmonotoneLaw when the values decrease, InvalidArgument when the
  /// table does not pass through the origin.
  static FluxLaw tabulated(std::vector<std::pair<double, double>> breakpoints);

  Kind kind() const { return kind_; }
  bool is_power() const { return kind_ == Kind::Power; }
  /// Exponent of a power law; throws for tabulated laws.
  double exponent() const;

  double g(double s) const;
  double dg(double s) const;
  double G(double s) const;

  /// Exponent q with |g(s)| ~ |s|^q as |s| -> infinity (p for power laws, 1 or
  /// 0 for tabulated laws depending on the extrapolation slope).
  double growth_exponent() const;

  const std::vector<std::pair<double, double>>& breakpoints() const { return table_; }

 private:
  FluxLaw() = default;

  Kind kind_ = Kind::Power;
  double p_ = 1.0;
  std::vector<std::pair<double, double>> table_;
  std::vector<double> cumulative_;  // G at each breakpoint
  std::size_t zero_index_ = 0;
  double slope_left_ = 0.0;
  double slope_right_ = 0.0;
};

inline double eval_g(const FluxLaw& law, double s) { return law.g(s); }

struct AdmissibilityOptions {
  double s_max = 1e6;
  double slope_margin = 0.05;
  double rel_tol = 1e-12;
};

struct AdmissibilityResult {
  bool finite = false;
  double value = 0.0;       // meaningful only when finite
  double tail_slope = 0.0;  // fitted log-log slope of the integrand near s_max
};

/// int_1^inf (g(s) - g(-s)) s^{-(2n+1)/n} ds, classified by the log-log tail
/// slope of the integrand. Throws Inconclusive when the slope sits within the
/// margin of -1.
AdmissibilityResult admissibility_integral(const FluxLaw& law, int n, const AdmissibilityOptions& opts = {});

}  // namespace nlflux
