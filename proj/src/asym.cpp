#include "fkink/asym.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fk {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double gamma_fn(double z) {
  if (!std::isfinite(z)) throw std::domain_error("gamma_fn: non-finite argument");
  if (z <= 0.0 && std::abs(z - std::round(z)) < 1e-8)
    throw std::domain_error("gamma_fn: argument at a pole");
  if (z < 0.5) return kPi / (std::sin(kPi * z) * gamma_fn(1.0 - z));
  const double x = z - 1.0;
  double a = kLanczos[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

TailLaw tail_law(double alpha) {
  if (!(alpha > 1.0 && alpha < 4.0))
    throw std::invalid_argument("tail_law: alpha must lie in (1,2) or (2,4)");
  if (std::abs(alpha - 2.0) < kEndpointExclusion ||
      std::abs(alpha - 4.0) < kEndpointExclusion)
    throw std::invalid_argument("tail_law: alpha in the endpoint exclusion zone");
  TailLaw law{};
  law.alpha = alpha;
  const double g = gamma_fn(0.5 * (alpha - 1.0));
  if (alpha < 2.0) {
    law.regime = Regime::sub_laplacian;
    law.derivative_prefactor = std::pow(2.0, alpha - 2.0) * alpha * (alpha - 1.0) * g /
                               (std::sqrt(kPi) * gamma_fn(0.5 * (2.0 - alpha)));
    law.remainder_order = 3;
    law.profile_remainder_order = 2;
  } else {
    law.regime = Regime::super_laplacian;
    law.derivative_prefactor = -std::pow(2.0, alpha - 3.0) * alpha * (alpha - 1.0) *
                               (alpha - 2.0) / std::sqrt(kPi) * g /
                               gamma_fn(0.5 * (4.0 - alpha));
    law.remainder_order = 5;
    law.profile_remainder_order = 4;
  }
  law.profile_prefactor = law.derivative_prefactor / alpha;
  return law;
}

RealField exact_kink_alpha2(const Grid& grid) {
  return RealField::sample(grid, [](double x) { return std::tanh(x / std::sqrt(2.0)); });
}

double exact_kernel(int alpha, double x) {
  const double ax = std::abs(x);
  if (alpha == 2) return std::exp(-std::sqrt(2.0) * ax) / (2.0 * std::sqrt(2.0));
  if (alpha == 4) {
    const double r = std::pow(2.0, 0.25);
    return r * std::exp(-ax / r) / 4.0 * std::sin(ax / r + kPi / 4.0);
  }
  throw std::invalid_argument("exact_kernel: alpha must be 2 or 4");
}

double kernel_asymptote(double alpha, double x) {
  if (!(std::abs(x) > 1.0))
    throw std::invalid_argument("kernel_asymptote: requires |x| > 1");
  const TailLaw law = tail_law(alpha);
  return 0.25 * law.derivative_prefactor * std::pow(std::abs(x), -1.0 - alpha);
}

}  // namespace fk
