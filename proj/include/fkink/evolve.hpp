#pragma once

// Parabolic flow u_t + D^alpha u + u (u^2 - 1) = 0 near a stationary kink.
//
// States are stored as u = b W + w with W = tanh(x / sqrt 2), b in
// {-1, 0, 1} and w periodic. The semi-implicit step treats D^alpha
// implicitly and the cubic explicitly; D^alpha W enters as a fixed source.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fkink/kink.hpp"
#include "fkink/specops.hpp"

namespace fk {

/// One step of w_{n+1} = (I + dt D^alpha)^{-1} [w + dt (u - u^3) - dt b D^alpha W]
/// for u = b W + w. Requires 0 < dt <= 0.4.
RealField step(const RealField& w, double dt, double alpha, int background_sign = 0);

/// I[u] = 1/2 ||D^{alpha/2} u||^2 + 1/4 int (1 - u^2)^2 for u = b W + w.
/// The background self-energy 1/2 ||D^{alpha/2} W||^2 is the whole-line
/// value; the cross term <D^alpha W, w> and 1/2 <D^alpha w, w> are spectral.
double energy(const RealField& w, double alpha, int background_sign = 0);

/// 1/2 ||D^{alpha/2} W||^2 on the real line.
double background_energy(double alpha);

/// Periodic correction of phi(. + sigma), i.e. W(. + sigma) - W + v(. + sigma).
RealField translate(const KinkProfile& phi, double sigma);

class DecompositionError : public std::runtime_error {
 public:
  DecompositionError(const std::string& what, double time = 0.0)
      : std::runtime_error(what), time(time) {}
  double time;
};

struct Decomposition {
  double sigma;
  RealField v;  // u - phi(. + sigma)
  /// |<v, phi'>|
  double orthogonality;
};

inline constexpr double kDecompositionRadius = 0.2;

/// Direction the remainder v is kept orthogonal to: phi' (unshifted) or
/// phi'(. + sigma) (co-moving).
enum class Frame { unshifted, shifted };

/// Solves <u - phi(. + sigma), phi'> = 0 for u = W + w by scalar Newton
/// (phi'(. + sigma) in the shifted frame).
Decomposition decompose(const RealField& w, const KinkProfile& phi, double sigma_guess = 0.0,
                        Frame frame = Frame::unshifted);

enum class PerturbationKind { odd, even, random };

PerturbationKind parse_perturbation(const std::string& name);
std::string to_string(PerturbationKind kind);

/// amplitude * bump: x exp((1 - x^2)/2) (odd), exp(-x^2/2) (even), or a
/// seeded sum of Gaussians of unit peak scale (random).
RealField perturbation(const Grid& grid, PerturbationKind kind, double amplitude,
                       std::uint64_t seed = 0);

/// imex: the step above. linearly_implicit: backward Euler linearized at
/// u_n, whose linear propagator near the kink is (I + dt L)^{-1}.
enum class Scheme { imex, linearly_implicit };

struct RunOptions {
  double sample_interval = 0.5;
  /// Fit window of log ||v|| as fractions of T.
  double decay_from = 0.5;
  double decay_to = 1.0;
  /// Fit window of log |sigma(t) - sigma(T)| as fractions of T.
  double shift_from = 0.25;
  double shift_to = 0.5;
  Frame frame = Frame::unshifted;
  Scheme scheme = Scheme::imex;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Least squares y = a + b t.
LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y);

struct EvolutionTrace {
  double alpha;
  double dt;
  double T;
  std::string descriptor;
  std::vector<double> times;
  std::vector<double> norm_l2;
  std::vector<double> norm_h;  // sqrt(<(1 + D^alpha) v, v>)
  std::vector<double> energies;
  std::vector<double> sigma;
  std::vector<double> orthogonality;
  /// Largest I[u_{n+1}] - I[u_n] over every step.
  double max_energy_increase;
  LineFit decay_fit;
  LineFit shift_fit;
  double kappa_fit;   // -decay_fit.slope
  double shift_rate;  // -shift_fit.slope
};

/// Round-off allowance when checking that the energy never increases.
inline constexpr double kEnergyTolerance = 1e-12;

/// Integrates from u0 = W + w0 to T with step dt. Decomposition loss is
/// reported as DecompositionError carrying the time.
EvolutionTrace run(const RealField& w0, const KinkProfile& phi, double T, double dt,
                   const RunOptions& options = {}, std::string descriptor = "");

}  // namespace fk
