#pragma once

#include <complex>
#include <functional>

namespace fk {

/// int_0^inf f(r) dr by the substitution r = exp(u) and the trapezoid rule
/// in u. Exponentially convergent for integrands analytic on (0, inf) that
/// decay algebraically at 0 and at least algebraically (rate > 1) at inf.
std::complex<double> integrate_half_line(
    const std::function<std::complex<double>(double)>& f, double du = 0.02);

double integrate_half_line_real(const std::function<double(double)>& f,
                                double du = 0.02);

}  // namespace fk
