#include "nlflux/numerics.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace nlflux {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonmonotoneLaw: return "NonmonotoneLaw";
    case ErrorKind::NewtonStall: return "NewtonStall";
    case ErrorKind::Inconclusive: return "Inconclusive";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::ImageSeriesTooShort: return "ImageSeriesTooShort";
    case ErrorKind::ConvergedToZero: return "ConvergedToZero";
    case ErrorKind::NoDescent: return "NoDescent";
    case ErrorKind::Unclassifiable: return "Unclassifiable";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

GaussRule make_gauss_legendre(int n) {
  GaussRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double z_prev = 0.0, dp = 1.0;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      z_prev = z;
      z = z_prev - p1 / dp;
    } while (std::abs(z - z_prev) > 1e-15);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  require(n >= 1, "gauss_legendre: n must be positive");
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
};

Panel kronrod_panel(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double f1 = f(c - h * kXgk[j]);
    const double f2 = f(c + h * kXgk[j]);
    k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace

QuadratureResult adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                                        double abs_tol, double rel_tol, int max_panels) {
  std::vector<Panel> panels{kronrod_panel(f, a, b)};
  auto total = [&] {
    double v = 0, e = 0;
    for (const auto& p : panels) v += p.value, e += p.error;
    return std::pair{v, e};
  };
  while (static_cast<int>(panels.size()) < max_panels) {
    auto [value, error] = total();
    if (error <= std::max(abs_tol, rel_tol * std::abs(value))) return {value, error, true};
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const Panel& l, const Panel& r) { return l.error < r.error; });
    const Panel p = *worst;
    const double mid = 0.5 * (p.a + p.b);
    *worst = kronrod_panel(f, p.a, mid);
    panels.push_back(kronrod_panel(f, mid, p.b));
  }
  auto [value, error] = total();
  return {value, error, error <= std::max(abs_tol, rel_tol * std::abs(value))};
}

MonotoneCubic::MonotoneCubic(Eigen::VectorXd xs, Eigen::VectorXd ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  const Eigen::Index n = xs_.size();
  require(n >= 2 && ys_.size() == n, "MonotoneCubic: need at least two matching samples");
  Eigen::VectorXd delta(n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    require(xs_[i + 1] > xs_[i], "MonotoneCubic: abscissae must be strictly increasing");
    delta[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
  }
  slopes_.resize(n);
  slopes_[0] = delta[0];
  slopes_[n - 1] = delta[n - 2];
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    slopes_[i] = delta[i - 1] * delta[i] <= 0 ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      slopes_[i] = slopes_[i + 1] = 0.0;
      continue;
    }
    const double alpha = slopes_[i] / delta[i];
    const double beta = slopes_[i + 1] / delta[i];
    const double r = alpha * alpha + beta * beta;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      slopes_[i] = tau * alpha * delta[i];
      slopes_[i + 1] = tau * beta * delta[i];
    }
  }
}

double MonotoneCubic::operator()(double x) const {
  const Eigen::Index n = xs_.size();
  if (x <= xs_[0]) return ys_[0];
  if (x >= xs_[n - 1]) return ys_[n - 1];
  const auto* begin = xs_.data();
  const Eigen::Index i = std::upper_bound(begin, begin + n, x) - begin - 1;
  const double h = xs_[i + 1] - xs_[i];
  const double s = (x - xs_[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * ys_[i] + h10 * h * slopes_[i] + h01 * ys_[i + 1] + h11 * h * slopes_[i + 1];
}

double interp_linear(const Eigen::Ref<const Eigen::VectorXd>& xs, const Eigen::Ref<const Eigen::VectorXd>& ys,
                     double x) {
  const Eigen::Index n = xs.size();
  if (x <= xs[0]) return ys[0];
  if (x >= xs[n - 1]) return ys[n - 1];
  const auto* begin = xs.data();
  const Eigen::Index i = std::upper_bound(begin, begin + n, x) - begin - 1;
  const double s = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return (1 - s) * ys[i] + s * ys[i + 1];
}

double safeguarded_newton(const std::function<std::pair<double, double>(double)>& f_and_df, double lo,
                          double hi, double tol, int max_iter) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const auto [f, df] = f_and_df(x);
    if (f == 0.0) return x;
    if (f < 0) lo = x; else hi = x;
    double next = (std::isfinite(df) && df > 0) ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= tol || hi - lo <= tol) return next;
    x = next;
  }
  throw Error(ErrorKind::NewtonStall, "safeguarded Newton did not converge");
}

void solve_tridiagonal(const Eigen::Ref<const Eigen::VectorXd>& lower, const Eigen::Ref<const Eigen::VectorXd>& diag,
                       const Eigen::Ref<const Eigen::VectorXd>& upper, Eigen::Ref<Eigen::VectorXd> rhs) {
  const Eigen::Index n = diag.size();
  Eigen::VectorXd c(n);
  double denom = diag[0];
  c[0] = upper[0] / denom;
  rhs[0] /= denom;
  for (Eigen::Index i = 1; i < n; ++i) {
    denom = diag[i] - lower[i] * c[i - 1];
    c[i] = i + 1 < n ? upper[i] / denom : 0.0;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) rhs[i] -= c[i] * rhs[i + 1];
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(std::abs(ys[i]));
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace nlflux
