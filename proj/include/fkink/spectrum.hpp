#pragma once

// Linearization of the kink equation,
//   L = (1-c^2)(-d^2/dx^2) [traveling] + D^alpha + 2 - 3 (1 - phi^2),
// its low-lying spectrum, and the block eigenproblem of the wave model.
//
// The discrete symbol keeps its Nyquist entry so that L is a symmetric
// matrix on the whole grid space, including even fields.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "fkink/kink.hpp"
#include "fkink/specops.hpp"

namespace fk {

class LinearizedOperator {
 public:
  /// Operator around a converged kink.
  explicit LinearizedOperator(const KinkProfile& profile);
  /// Symbol part alone, m + D^alpha (no potential). Useful as a test operator.
  static LinearizedOperator free(const Grid& grid, double alpha, double mass = 2.0);

  const Grid& grid() const { return grid_; }
  double alpha() const { return alpha_; }
  const RieszSymbol& symbol() const { return symbol_; }
  /// -3 (1 - phi^2), or zero for the free operator.
  const RealField& potential() const { return potential_; }
  const std::optional<KinkProfile>& profile() const { return profile_; }

  RealField apply(const RealField& f) const;
  /// (symbol + shift)^{-1} f, Nyquist included.
  RealField apply_symbol_inverse(const RealField& f, double shift) const;
  /// Solves (L + shift) x = f by preconditioned conjugate gradients.
  RealField solve_shifted(const RealField& f, double shift, double rtol = 1e-13,
                          int max_iter = 1000) const;
  /// Dense matrix, column j = L e_j. Row-major, N*N entries.
  std::vector<double> dense() const;

 private:
  LinearizedOperator(Grid grid, double alpha, RieszSymbol symbol, RealField potential,
                     std::optional<KinkProfile> profile);
  Grid grid_;
  double alpha_;
  RieszSymbol symbol_;
  RealField potential_;
  std::optional<KinkProfile> profile_;
};

LinearizedOperator assemble(const KinkProfile& profile);

enum class Parity { even, odd, mixed };

struct SpectrumOptions {
  bool split_parity = true;
  int max_lanczos = 400;  // operator solves per sector
  double residual_tol = 1e-8;
  double shift = -1.0;    // Lanczos runs on (L - shift)^{-1}
  std::uint64_t seed = 12345;
};

struct SpectrumReport {
  double alpha;
  double half_length;
  /// Symbol part of L (mass included); fixes the free dispersion.
  RieszSymbol symbol;
  /// The k smallest eigenvalues overall, ascending.
  std::vector<double> eigenvalues;
  std::vector<RealField> eigenvectors;  // unit discrete L2 norm
  std::vector<Parity> parity;
  std::vector<double> residuals;        // ||L v - lambda v|| / ||v||
  /// All eigenvalues found per sector (k each when split).
  std::vector<double> even_eigenvalues;
  std::vector<double> odd_eigenvalues;
  std::vector<double> unsplit_eigenvalues;
  /// |cos| of the angle between the lambda_0 eigenvector and phi'; NaN without profile.
  double ground_alignment;
  bool uniqueness_verdict;
  int matvecs;
};

/// The k smallest eigenpairs (k <= 10 per sector) by shift-invert Lanczos
/// with full reorthogonalization.
SpectrumReport low_spectrum(const LinearizedOperator& op, int k,
                            const SpectrumOptions& options = {});

/// <L f, f> / <f, f>.
double rayleigh_quotient(const LinearizedOperator& op, const RealField& f);

/// All eigenvalues of the dense matrix, ascending. N <= 2048.
std::vector<double> dense_spectrum(const LinearizedOperator& op);

struct UniquenessVerdict {
  bool lambda1_above_one;  // lambda_1 > 1 + margin
  double lambda1;
  double margin;           // 3 * largest eigen-residual
  /// lambda_0 eigenvector keeps one sign.
  bool ground_sign_definite;
  /// A sign change is allowed (alpha > 2) rather than a violation.
  bool sign_change_permitted;
};

UniquenessVerdict uniqueness_check(const SpectrumReport& report);

/// Lowest eigenvalue from which 5 consecutive spacings in a parity sector
/// are within 20% of the free-operator spacing. Throws if no such run.
double essential_edge(const SpectrumReport& report);

/// min(lambda_1, essential_edge) when the edge is detectable, else lambda_1.
double spectral_gap(const SpectrumReport& report);

struct WaveStabilityReport {
  std::vector<std::complex<double>> eigenvalues;
  /// Over all 2N eigenvalues.
  double max_real_all;
  /// Excluding the two eigenvalues closest to 0 (the translation pair).
  double max_real;
};

inline constexpr int kDenseLimit = 2048;

/// Dense spectrum of [[0, I], [-L, 2c d/dx]].
WaveStabilityReport wave_stability(const KinkProfile& profile);

/// Largest |mu - (+-i sqrt(lambda))| between the block spectrum at c = 0 and
/// the spectrum of L, translation pair excluded.
double wave_static_mismatch(const KinkProfile& profile, const WaveStabilityReport& report);

struct WaveStructure {
  double max_real_J;  // max |Re <J f, f>| / |f|^2
  double max_imag_H;  // max |Im <H f, f>| / |f|^2
};

/// J = [[0, I], [-I, 2c d/dx]], H = diag(L, I) on random complex pairs.
WaveStructure wave_structure_check(const KinkProfile& profile, int samples,
                                   std::uint64_t seed);

}  // namespace fk
