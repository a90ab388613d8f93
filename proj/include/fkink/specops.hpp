#pragma once

// Uniform periodic grids, real fields on them, and Fourier-multiplier
// operators under the convention f^(xi) = int f(x) exp(-2 pi i x xi) dx.

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fk {

class Grid {
 public:
  /// Nodes x_j = -L + 2L j / N, j = 0..N-1. N must be even and >= 16.
  Grid(double half_length, int n_points);

  double half_length() const { return half_length_; }
  int size() const { return n_; }
  double spacing() const { return 2.0 * half_length_ / n_; }
  double node(int j) const { return -half_length_ + spacing() * j; }
  std::vector<double> nodes() const;

  /// Frequency of r2c coefficient k, k = 0..N/2.
  double frequency(int k) const { return k / (2.0 * half_length_); }
  int n_coefficients() const { return n_ / 2 + 1; }

  /// Index of the node at -x_j (x_0 = -L is identified with +L).
  int mirror(int j) const { return j == 0 ? 0 : n_ - j; }
  /// Index of x = 0.
  int center() const { return n_ / 2; }

  bool operator==(const Grid&) const = default;

 private:
  double half_length_;
  int n_;
};

class RealField {
 public:
  explicit RealField(Grid grid);
  RealField(Grid grid, std::vector<double> values);

  template <class Fn>
  static RealField sample(const Grid& grid, Fn&& fn) {
    std::vector<double> v(grid.size());
    for (int j = 0; j < grid.size(); ++j) v[j] = fn(grid.node(j));
    return RealField(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](int j) const { return values_[j]; }
  double& operator[](int j) { return values_[j]; }

  RealField& operator+=(const RealField& o);
  RealField& operator-=(const RealField& o);
  RealField& operator*=(double s);
  /// this += s * o
  RealField& axpy(double s, const RealField& o);

  bool all_finite() const;
  double max_abs() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double s, RealField a);
/// Pointwise product.
RealField hadamard(const RealField& a, const RealField& b);

/// sigma(xi) = m + 4 pi^2 (1 - c^2) xi^2 [if second_order] + (2 pi |xi|)^order
struct RieszSymbol {
  double order = 2.0;
  double mass = 0.0;
  bool second_order = false;
  double speed = 0.0;

  double operator()(double xi) const;
};

RieszSymbol pure_riesz(double order);

void require_same_grid(const RealField& a, const RealField& b);

/// Forward transform coefficients c_k = h * sum_j f_j exp(-2 pi i xi_k x_j),
/// k = 0..N/2 (so c_k approximates f^(xi_k)).
std::vector<std::complex<double>> fourier_coefficients(const RealField& f);
RealField from_fourier_coefficients(const Grid& grid,
                                    std::span<const std::complex<double>> c);

/// Applies an even real multiplier m(|xi|). The Nyquist coefficient is
/// zeroed unless keep_nyquist, in which case it is scaled by m(N / 4L).
RealField apply_multiplier(const RealField& f,
                           const std::function<double(double)>& multiplier,
                           bool keep_nyquist = false);

RealField apply_symbol(const RealField& f, const RieszSymbol& sym);

/// Applies 1 / sigma(xi) (sigma must be positive on the grid frequencies).
RealField solve_symbol(const RealField& f, const RieszSymbol& sym);

/// Spectral derivative d^order f / dx^order.
RealField derivative(const RealField& f, int order = 1);

/// Band-limited translate: returns g with g(x) = f(x + s).
RealField shift(const RealField& f, double s);

/// Singular-integral form of D^s, s in (0,1), with a desingularized
/// quadrature on the grid. Intended for rapidly decaying inputs only.
RealField apply_riesz_singular(const RealField& f, double s);
/// Normalization constant of the singular-integral form of D^s.
double riesz_singular_constant(double s);

/// h * sum_j f_j g_j
double inner(const RealField& f, const RealField& g);
double norm(const RealField& f);

RealField odd_part(const RealField& f);
RealField even_part(const RealField& f);
/// max_j |f(x_j) + f(-x_j)|
double odd_defect(const RealField& f);
/// max_j |f(x_j) - f(-x_j)|
double even_defect(const RealField& f);

inline constexpr double kParityTolerance = 1e-10;

}  // namespace fk
