#pragma once

// Resolvent kernels K(x) of (m + (1-c^2)(-d^2/dx^2)[optional] + D^alpha)^{-1}.
//
// K(x) = (1/pi) int_0^inf cos(k x) / sigma(k) dk with
// sigma(k) = m + b k^2 + k^alpha. sigma has no zeros in the sector
// 0 <= arg k < pi/alpha, so the integral is taken along the ray
// k = r exp(i theta), theta = min(pi/4, pi/(2 alpha)), where exp(i k x)
// decays and the algebraic singularity at k = 0 is absorbed by r = exp(u).

#include <functional>
#include <optional>
#include <vector>

#include "fkink/specops.hpp"

namespace fk {

struct KernelSpec {
  double alpha;
  double mass = 2.0;
  double c = 0.0;
  bool second_order = false;
};

/// Quadrature value K(x).
double kernel_value(const KernelSpec& spec, double x);

struct KernelTableOptions {
  double crossover_radius = 25.0;
  /// Replace quadrature by the asymptote for x > crossover_radius.
  bool far_field = false;
  double panel_width = 0.5;
};

struct KernelTable {
  KernelSpec spec;
  double x_max;
  double crossover_radius;
  bool far_field;
  std::vector<double> x;        // x >= 0; x[0] = 0
  std::vector<double> weight;   // quadrature weights for int_0^x_max
  std::vector<double> value;    // reported K
  std::vector<double> quadrature;
  std::vector<double> asymptote;  // NaN where no asymptote applies
  std::vector<double> rel_err;    // (quadrature - asymptote) / asymptote

  /// Leading tail law available (alpha in (1,2) or (2,4))?
  bool has_asymptote() const;
};

KernelTable kernel_table(const KernelSpec& spec, double x_max,
                         const KernelTableOptions& options = {});

/// 2 int_0^x_max K + leading-tail correction; should equal 1/m.
double kernel_moment0(const KernelTable& table);
/// Estimated error of the tail correction used by kernel_moment0.
double kernel_tail_bound(const KernelTable& table);

struct SignReport {
  double k0;
  std::vector<double> crossings;
  bool negative_beyond_last;
};

SignReport kernel_sign_scan(const KernelTable& table);

/// (K * f)(x_j) on the grid using the table's quadrature rule.
RealField convolve(const KernelTable& table, const Grid& grid,
                   const std::function<double(double)>& f);

}  // namespace fk
