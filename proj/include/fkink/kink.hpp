#pragma once

// Stationary and traveling kinks of the fractional phi^4 equation
//   -(1-c^2) phi'' [traveling only] + D^alpha phi + phi (phi^2 - 1) = 0
// computed as phi = W + v with the fixed background W = tanh(x / sqrt 2)
// and an odd periodic correction v.
//
// On the periodic grid D^alpha W is evaluated as D^{alpha-2}(-W''), so the
// operator never sees the jump of W at x = +-L. The discrete problem is
// that of a kink lattice with period 2L; phi(+-L) = +-1 exactly.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fkink/asym.hpp"
#include "fkink/specops.hpp"

namespace fk {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KinkOptions {
  double newton_tol = 1e-9;  // discrete L2 norm of the residual
  int max_newton = 50;
  int max_backtracks = 20;
  int max_krylov = 2000;
  /// Permits traveling kinks with alpha in (2,4), where existence is not established.
  bool allow_unbacked = false;
};

struct KinkProfile {
  Grid grid;
  double alpha;
  double c;
  /// True when the -(1-c^2) d^2/dx^2 term is present (wave model).
  bool traveling;
  RealField correction;  // v = phi - W
  RealField phi;
  RealField dphi;
  double residual_norm;
  int iterations;
  std::string background = "tanh(x/sqrt(2))";
};

/// W(x + shift) and its derivatives on the grid.
RealField background(const Grid& grid, int derivative_order = 0, double shift = 0.0);

/// The kink operator without the nonlinearity (mass zero).
RieszSymbol kink_symbol(double alpha, double c, bool traveling);

/// Symbol applied to the background W(. + shift).
RealField background_action(const Grid& grid, double alpha, double c, bool traveling,
                            double shift = 0.0);

/// F(v) = S[W + v] + (W+v)((W+v)^2 - 1). Odd when v is odd.
RealField residual(const RealField& v, double alpha, double c, bool traveling);

/// Damped Newton-Krylov solve in the odd subspace. Without init the
/// iteration starts from v = 0. Stationary when c == 0 unless
/// traveling is forced.
KinkProfile solve_kink(const Grid& grid, double alpha, double c = 0.0,
                       const std::optional<KinkProfile>& init = std::nullopt,
                       const KinkOptions& options = {},
                       std::optional<bool> traveling = std::nullopt);

/// Thrown when continuation cannot progress; carries the last good alpha.
class ContinuationError : public ConvergenceError {
 public:
  ContinuationError(const std::string& what, double last_alpha)
      : ConvergenceError(what), last_alpha(last_alpha) {}
  double last_alpha;
};

/// Homotopy from alpha_from (seeded from the exact alpha = 2 kink when
/// alpha_from == 2) to alpha_to. Returns the profile after every accepted
/// step, or the starting profile alone for an empty path.
std::vector<KinkProfile> continue_in_alpha(const Grid& grid, double alpha_from,
                                           double alpha_to, double step, double c = 0.0,
                                           const KinkOptions& options = {},
                                           std::optional<bool> traveling = std::nullopt);

enum class TailQuantity { profile_defect, derivative };

struct TailFit {
  double x_lo;
  double x_hi;
  int nodes;
  TailQuantity quantity;
  double fitted_exponent;
  /// Exponent of the plain fit, before any image correction.
  double raw_exponent;
  bool image_corrected;
  /// Signed coefficient from the intercept of the free log-log fit.
  double fitted_prefactor;
  /// Signed coefficient with the exponent pinned to the predicted one.
  double pinned_prefactor;
  std::optional<TailLaw> law;
  double expected_exponent;
  double expected_prefactor;
  double rel_exponent_err;
  double rel_prefactor_err;
  double rel_pinned_prefactor_err;
};

/// Least-squares line through (log x, log|q|) for x in [x_lo, x_hi], where
/// q = 1 - phi or q = phi'. With skip_crossings the window start moves past
/// the last sign change of phi' (and of 1 - phi) found scanning inward
/// from L/2. With image_correction the tails of the periodic copies of the
/// kink (centred at +-2nL) are removed using the fitted power law itself,
/// iterated to a fixed point; this estimates the whole-line tail.
TailFit fit_tail(const KinkProfile& p, TailQuantity quantity, double x_lo = 20.0,
                 double x_hi = 80.0, bool skip_crossings = false,
                 bool image_correction = false);

/// int (1 - phi^2) phi' dx; equals 4/3 for any kink.
double flux_identity(const KinkProfile& p);

}  // namespace fk
