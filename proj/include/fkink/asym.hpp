#pragma once

// Closed-form oracles: Gamma function, kink tail laws, resolvent-kernel
// asymptotes, and the exact alpha = 2 / alpha = 4 solutions.

#include "fkink/specops.hpp"

namespace fk {

/// Gamma function, Lanczos approximation (g = 7, 9 terms) with reflection
/// below 1/2. Throws std::domain_error within 1e-8 of a pole.
double gamma_fn(double z);

enum class Regime { sub_laplacian, super_laplacian };

/// Leading tail of a kink of order alpha:
///   phi'(x)        ~ derivative_prefactor * |x|^{-1-alpha}
///   sgn(x) - phi   ~ sgn(x) * profile_prefactor * |x|^{-alpha}
struct TailLaw {
  Regime regime;
  double alpha;
  double derivative_prefactor;
  double profile_prefactor;
  /// Exponent of the remainder in the derivative law (3 or 5).
  int remainder_order;
  /// Exponent of the remainder in the profile law (2 or 4).
  int profile_remainder_order;
};

inline constexpr double kEndpointExclusion = 1e-6;

/// alpha in (1,2) or (2,4); throws std::invalid_argument otherwise or when
/// alpha is within kEndpointExclusion of 2 or 4.
TailLaw tail_law(double alpha);

/// tanh(x / sqrt(2)) sampled on the grid.
RealField exact_kink_alpha2(const Grid& grid);

/// Closed-form kernel of (D^alpha + 2)^{-1} for alpha = 2 or 4.
double exact_kernel(int alpha, double x);

/// Leading far-field term of the kernel of (D^alpha + 2)^{-1}; equals
/// tail_law(alpha).derivative_prefactor / 4 times |x|^{-1-alpha}. Requires
/// |x| > 1.
double kernel_asymptote(double alpha, double x);

}  // namespace fk
