#include "fkink/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace fk {

namespace {

constexpr double kStopRatio = 1e-18;
constexpr int kQuietSteps = 60;
constexpr double kMaxSpan = 900.0;

}  // namespace

std::complex<double> integrate_half_line(
    const std::function<std::complex<double>(double)>& f, double du) {
  auto term = [&](double u) {
    const double r = std::exp(u);
    return f(r) * r;
  };
  std::complex<double> sum = term(0.0);
  // upward then downward; stop after a run of negligible terms
  for (int dir : {1, -1}) {
    int quiet = 0;
    for (int i = 1;; ++i) {
      const double u = dir * i * du;
      if (std::abs(u) > kMaxSpan)
        throw std::runtime_error("integrate_half_line: integrand decays too slowly");
      const std::complex<double> t = term(u);
      if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) {
        if (dir > 0 && std::exp(u) > 1e300) break;
        throw std::runtime_error("integrate_half_line: non-finite integrand");
      }
      sum += t;
      quiet = (std::abs(t) <= kStopRatio * std::abs(sum)) ? quiet + 1 : 0;
      if (quiet >= kQuietSteps || (t == 0.0 && i > kQuietSteps)) break;
    }
  }
  return sum * du;
}

double integrate_half_line_real(const std::function<double(double)>& f, double du) {
  return integrate_half_line([&](double r) { return std::complex<double>(f(r), 0.0); },
                             du)
      .real();
}

}  // namespace fk
