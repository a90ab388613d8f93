#include "fkink/green.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fkink/asym.hpp"
#include "fkink/quadrature.hpp"

namespace fk {

namespace {

constexpr double kPi = std::numbers::pi;

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

void validate(const KernelSpec& s) {
  const bool exact = s.alpha == 2.0 || s.alpha == 4.0;
  if (!(s.alpha > 1.0 && s.alpha <= 4.0))
    throw std::invalid_argument("kernel: alpha must lie in (1, 4]");
  if (!exact && (std::abs(s.alpha - 2.0) < 1e-6 || std::abs(s.alpha - 4.0) < 1e-6))
    throw std::invalid_argument("kernel: alpha in the endpoint exclusion zone");
  if (!(s.mass > 0.0)) throw std::invalid_argument("kernel: mass must be positive");
  if (!(std::abs(s.c) < 1.0)) throw std::invalid_argument("kernel: |c| must be < 1");
}

bool asymptote_defined(const KernelSpec& s) {
  return std::abs(s.alpha - 2.0) >= 1e-6 && s.alpha < 4.0 - 1e-6;
}

// Leading far-field coefficient for general mass m: -(1/m^2) |k|^alpha term.
double asymptote_value(const KernelSpec& s, double x) {
  // (1/pi) * Gamma(1+a) sin(pi a / 2) / m^2 * x^{-1-a}; reduces to
  // kernel_asymptote for m = 2.
  const double a = s.alpha;
  const double coef = gamma_fn(1.0 + a) * std::sin(0.5 * kPi * a) / (kPi * s.mass * s.mass);
  return coef * std::pow(std::abs(x), -1.0 - a);
}

}  // namespace

double kernel_value(const KernelSpec& spec, double x) {
  validate(spec);
  const double ax = std::abs(x);
  const double theta = std::min(kPi / 4.0, kPi / (2.0 * spec.alpha));
  const std::complex<double> dir = std::polar(1.0, theta);
  const double b = spec.second_order ? 1.0 - spec.c * spec.c : 0.0;
  auto integrand = [&](double r) {
    const std::complex<double> k = r * dir;
    const std::complex<double> ka = std::exp(spec.alpha * std::log(k));
    const std::complex<double> sigma = spec.mass + b * k * k + ka;
    return std::exp(std::complex<double>(0.0, ax) * k) / sigma;
  };
  return (dir * integrate_half_line(integrand)).real() / kPi;
}

bool KernelTable::has_asymptote() const { return asymptote_defined(spec); }

KernelTable kernel_table(const KernelSpec& spec, double x_max,
                         const KernelTableOptions& options) {
  validate(spec);
  if (!(x_max > 1.0)) throw std::invalid_argument("kernel_table: x_max must exceed 1");
  if (x_max > 10.0 * options.crossover_radius && !options.far_field)
    throw std::invalid_argument(
        "kernel_table: x_max > 10 R* requires the far-field handoff");
  if (options.far_field && !asymptote_defined(spec))
    throw std::invalid_argument("kernel_table: no far-field law for this alpha");

  // Panels: geometric grading toward the cusp at 0, then uniform.
  std::vector<double> breaks{0.0};
  for (int i = 30; i >= 1; --i) breaks.push_back(options.panel_width * std::pow(0.5, i));
  const int uniform = static_cast<int>(std::ceil(x_max / options.panel_width));
  for (int i = 1; i <= uniform; ++i)
    breaks.push_back(std::min(x_max, i * x_max / uniform));

  KernelTable t;
  t.spec = spec;
  t.x_max = x_max;
  t.crossover_radius = options.crossover_radius;
  t.far_field = options.far_field;
  t.x.push_back(0.0);
  t.weight.push_back(0.0);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], bnd = breaks[p + 1];
    const double mid = 0.5 * (a + bnd), half = 0.5 * (bnd - a);
    for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
      t.x.push_back(mid + half * kGlNodes[q]);
      t.weight.push_back(half * kGlWeights[q]);
    }
  }
  const std::size_t n = t.x.size();
  t.value.resize(n);
  t.quadrature.resize(n);
  t.asymptote.assign(n, std::numeric_limits<double>::quiet_NaN());
  t.rel_err.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    const double x = t.x[i];
    const bool far = options.far_field && x > options.crossover_radius;
    if (asymptote_defined(spec) && x > 1.0) t.asymptote[i] = asymptote_value(spec, x);
    t.quadrature[i] = far ? std::numeric_limits<double>::quiet_NaN() : kernel_value(spec, x);
    t.value[i] = far ? t.asymptote[i] : t.quadrature[i];
    if (!far && !std::isnan(t.asymptote[i]))
      t.rel_err[i] = (t.quadrature[i] - t.asymptote[i]) / t.asymptote[i];
  }
  return t;
}

double kernel_tail_bound(const KernelTable& t) {
  const double X = t.x_max;
  if (!t.has_asymptote()) {
    // exponential kernels: bounded by a crude multiple of |K(X)|
    return 2.0 * std::abs(kernel_value(t.spec, X)) * X;
  }
  // remainder O(x^{-q}) with q = 3 (alpha < 2) or 5 (alpha > 2)
  const double q = t.spec.alpha < 2.0 ? 3.0 : 5.0;
  const double r = std::abs(kernel_value(t.spec, X) - asymptote_value(t.spec, X));
  return 2.0 * r * X / (q - 1.0);
}

double kernel_moment0(const KernelTable& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.x.size(); ++i) s += t.weight[i] * t.value[i];
  s *= 2.0;
  if (t.has_asymptote())
    s += 2.0 * asymptote_value(t.spec, t.x_max) * t.x_max / t.spec.alpha;
  if (kernel_tail_bound(t) > 1e-7)
    throw std::invalid_argument("kernel_moment0: insufficient x_max for the tail correction");
  return s;
}

SignReport kernel_sign_scan(const KernelTable& t) {
  SignReport rep{};
  rep.k0 = t.value.front();
  // sign changes buried in round-off of the quadrature are not crossings
  const double floor = 1e-13 * std::abs(rep.k0);
  for (std::size_t i = 1; i < t.x.size(); ++i) {
    const double a = t.value[i - 1], b = t.value[i];
    if ((a > 0.0) != (b > 0.0) && std::max(std::abs(a), std::abs(b)) > floor) {
      double lo = t.x[i - 1], hi = t.x[i];
      double flo = a;
      for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = kernel_value(t.spec, mid);
        if ((fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      rep.crossings.push_back(0.5 * (lo + hi));
    }
  }
  if (rep.crossings.empty()) {
    rep.negative_beyond_last = false;
    if (t.spec.alpha > 2.0)
      throw std::runtime_error("kernel_sign_scan: no sign change within x_max");
    return rep;
  }
  rep.negative_beyond_last = true;
  for (std::size_t i = 0; i < t.x.size(); ++i)
    if (t.x[i] > rep.crossings.back() && !(t.value[i] < 0.0) &&
        std::abs(t.value[i]) > floor)
      rep.negative_beyond_last = false;
  return rep;
}

RealField convolve(const KernelTable& t, const Grid& grid,
                   const std::function<double(double)>& f) {
  RealField out(grid);
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    double s = 0.0;
    for (std::size_t i = 1; i < t.x.size(); ++i)
      s += t.weight[i] * t.value[i] * (f(x - t.x[i]) + f(x + t.x[i]));
    out[j] = s;
  }
  return out;
}

}  // namespace fk
