#include "fkink/kink.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fk {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double sech2(double y) {
  const double c = std::cosh(y);
  return 1.0 / (c * c);
}

void validate_model(double alpha, double c, bool traveling, bool allow_unbacked) {
  if (!std::isfinite(alpha) || !(alpha > 1.0 && alpha < 4.0)) {
    std::ostringstream os;
    os << "kink solver requires 1 < alpha < 4 (got " << alpha << ")";
    throw std::invalid_argument(os.str());
  }
  if (!(std::abs(c) < 1.0)) throw std::invalid_argument("kink speed must satisfy |c| < 1");
  if (!traveling && c != 0.0)
    throw std::invalid_argument("a stationary kink has c = 0");
  if (traveling && alpha > 2.0 && !allow_unbacked)
    throw std::invalid_argument(
        "traveling kinks are only supported for alpha in (1,2]; pass "
        "allow_unbacked to attempt alpha > 2");
}

// Preconditioned CG for J d = b on the odd subspace, J = S + diag(pot).
RealField solve_jacobian(const RieszSymbol& sym, const RealField& pot, const RealField& b,
                         double abs_tol, int max_iter) {
  const RieszSymbol pre{sym.order, 2.0, sym.second_order, sym.speed};
  auto apply_j = [&](const RealField& d) {
    RealField out = odd_part(apply_symbol(d, sym) + hadamard(pot, d));
    return out;
  };
  auto apply_m = [&](const RealField& r) { return odd_part(solve_symbol(r, pre)); };

  RealField x(b.grid());
  RealField r = odd_part(b);
  RealField z = apply_m(r);
  RealField p = z;
  double rz = inner(r, z);
  for (int it = 0; it < max_iter; ++it) {
    if (norm(r) <= abs_tol) return x;
    const RealField ap = apply_j(p);
    const double pap = inner(p, ap);
    if (!(pap > 0.0)) throw ConvergenceError("Jacobian solve breakdown (indefinite)");
    const double a = rz / pap;
    x.axpy(a, p);
    r.axpy(-a, ap);
    z = apply_m(r);
    const double rz_new = inner(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    p *= beta;
    p += z;
  }
  if (norm(r) <= 10.0 * abs_tol) return x;
  throw ConvergenceError("Jacobian solve did not converge");
}

struct LogLine {
  double slope;
  double intercept;
  double mean_log_x;
  double mean_log_q;
};

// Least squares through (log x, log|q|).
LogLine loglog(const std::vector<double>& x, const std::vector<double>& q) {
  const std::size_t n = x.size();
  double mx = 0, mq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    mq += std::log(std::abs(q[i]));
  }
  mx /= n;
  mq /= n;
  double sxx = 0, sxq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxq += dx * (std::log(std::abs(q[i])) - mq);
  }
  const double slope = sxq / sxx;
  return LogLine{slope, mq - slope * mx, mx, mq};
}

// Tail of the kinks centred at +-2nL, n >= 1, seen at x in (0, L), for a
// whole-line tail amp * y^-pw. The periodic problem is a staircase of
// kinks, so 1 - phi loses T(2nL - x) - T(2nL + x) and phi' gains
// D(2nL - x) + D(2nL + x).
double image_sum(TailQuantity quantity, double amp, double pw, double x, double half_length) {
  const double sgn = quantity == TailQuantity::profile_defect ? -1.0 : 1.0;
  constexpr int kTerms = 64;
  double s = 0.0;
  for (int k = 1; k <= kTerms; ++k) {
    const double a = std::pow(2.0 * k * half_length - x, -pw);
    const double b = std::pow(2.0 * k * half_length + x, -pw);
    s += -a - sgn * b;
  }
  // remaining terms by the midpoint integral
  const double k0 = kTerms + 0.5;
  const double scale = 2.0 * half_length * (pw - 1.0);
  s += -(std::pow(2.0 * k0 * half_length - x, 1.0 - pw) +
         sgn * std::pow(2.0 * k0 * half_length + x, 1.0 - pw)) /
       scale;
  return quantity == TailQuantity::profile_defect ? -amp * s : amp * s;
}

KinkProfile make_profile(const Grid& grid, double alpha, double c, bool traveling,
                         RealField v, double res, int iters) {
  RealField phi = background(grid) + v;
  RealField dphi = background(grid, 1) + derivative(v);
  return KinkProfile{grid,          alpha, c, traveling, std::move(v), std::move(phi),
                     std::move(dphi), res,  iters};
}

}  // namespace

RealField background(const Grid& grid, int derivative_order, double shift) {
  return RealField::sample(grid, [&](double x) {
    const double y = (x + shift) / kSqrt2;
    switch (derivative_order) {
      case 0:
        return std::tanh(y);
      case 1:
        return sech2(y) / kSqrt2;
      case 2:
        return -sech2(y) * std::tanh(y);
      default:
        throw std::invalid_argument("background: derivative order must be 0, 1 or 2");
    }
  });
}

RieszSymbol kink_symbol(double alpha, double c, bool traveling) {
  return RieszSymbol{alpha, 0.0, traveling, c};
}

RealField background_action(const Grid& grid, double alpha, double c, bool traveling,
                            double shift) {
  RealField minus_w2 = -1.0 * background(grid, 2, shift);
  const double b = traveling ? 1.0 - c * c : 0.0;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  return apply_multiplier(minus_w2, [&](double xi) {
    if (xi == 0.0) return 0.0;
    return std::pow(kTwoPi * std::abs(xi), alpha - 2.0) + b;
  });
}

RealField residual(const RealField& v, double alpha, double c, bool traveling) {
  const Grid& g = v.grid();
  RealField f = background_action(g, alpha, c, traveling);
  f += apply_symbol(v, kink_symbol(alpha, c, traveling));
  const RealField w = background(g);
  for (int j = 0; j < g.size(); ++j) {
    const double phi = w[j] + v[j];
    f[j] += phi * (phi * phi - 1.0);
  }
  if (!f.all_finite()) throw std::domain_error("residual: non-finite arithmetic");
  return f;
}

KinkProfile solve_kink(const Grid& grid, double alpha, double c,
                       const std::optional<KinkProfile>& init, const KinkOptions& options,
                       std::optional<bool> traveling) {
  const bool wave = traveling.value_or(c != 0.0);
  validate_model(alpha, c, wave, options.allow_unbacked);
  if (init && !(init->grid == grid))
    throw std::invalid_argument("solve_kink: initial profile lives on another grid");

  const RieszSymbol sym = kink_symbol(alpha, c, wave);
  const RealField w = background(grid);
  RealField v = init ? odd_part(init->correction) : RealField(grid);
  RealField f = odd_part(residual(v, alpha, c, wave));
  double fnorm = norm(f);

  for (int it = 0; it <= options.max_newton; ++it) {
    if (fnorm <= options.newton_tol)
      return make_profile(grid, alpha, c, wave, std::move(v), fnorm, it);
    if (it == options.max_newton) break;

    RealField pot(grid);
    for (int j = 0; j < grid.size(); ++j) {
      const double phi = w[j] + v[j];
      pot[j] = 3.0 * phi * phi - 1.0;
    }
    const RealField step =
        solve_jacobian(sym, pot, -1.0 * f, std::max(1e-3 * options.newton_tol,
                                                     1e-8 * fnorm),
                       options.max_krylov);

    double lambda = 1.0;
    bool accepted = false;
    for (int bt = 0; bt <= options.max_backtracks; ++bt) {
      RealField trial = v;
      trial.axpy(lambda, step);
      trial = odd_part(trial);
      RealField ft = odd_part(residual(trial, alpha, c, wave));
      const double tn = norm(ft);
      if (tn < fnorm) {
        v = std::move(trial);
        f = std::move(ft);
        fnorm = tn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      // No further decrease available; accept if already at tolerance.
      if (fnorm <= options.newton_tol) break;
      std::ostringstream os;
      os << "Newton line search failed at alpha=" << alpha << ", residual " << fnorm;
      throw ConvergenceError(os.str());
    }
  }
  if (fnorm <= options.newton_tol)
    return make_profile(grid, alpha, c, wave, std::move(v), fnorm, options.max_newton);
  std::ostringstream os;
  os << "Newton did not converge within " << options.max_newton
     << " iterations at alpha=" << alpha << " (residual " << fnorm << ")";
  throw ConvergenceError(os.str());
}

std::vector<KinkProfile> continue_in_alpha(const Grid& grid, double alpha_from,
                                           double alpha_to, double step, double c,
                                           const KinkOptions& options,
                                           std::optional<bool> traveling) {
  if (!(step > 0.0 && step <= 0.1))
    throw std::invalid_argument("continuation step must lie in (0, 0.1]");
  for (double a : {alpha_from, alpha_to})
    if (!(a > 1.0 && a < 4.0))
      throw std::invalid_argument("continuation path must stay inside (1,4)");

  std::vector<KinkProfile> out;
  KinkProfile current = solve_kink(grid, alpha_from, c, std::nullopt, options, traveling);
  if (alpha_from == alpha_to) {
    out.push_back(std::move(current));
    return out;
  }
  const double dir = alpha_to > alpha_from ? 1.0 : -1.0;
  double h = step;
  double alpha = alpha_from;
  // Nominal stations are alpha_from + k*step; halving inserts intermediates.
  while (dir * (alpha_to - alpha) > 1e-12) {
    double next = alpha + dir * h;
    if (dir * (next - alpha_to) > -1e-12) next = alpha_to;
    try {
      current = solve_kink(grid, next, c, current, options, traveling);
      alpha = next;
      out.push_back(current);
      h = std::min(step, 2.0 * h);
    } catch (const ConvergenceError&) {
      h *= 0.5;
      if (h < 1e-3) {
        std::ostringstream os;
        os << "continuation step underflow; last converged alpha = " << alpha;
        throw ContinuationError(os.str(), alpha);
      }
    }
  }
  return out;
}

TailFit fit_tail(const KinkProfile& p, TailQuantity quantity, double x_lo, double x_hi,
                 bool skip_crossings, bool image_correction) {
  const Grid& g = p.grid;
  const double half = 0.5 * g.half_length();
  if (!(x_lo >= 10.0 && x_hi <= half + 1e-12 && x_lo < x_hi))
    throw std::invalid_argument("fit_tail: window must satisfy 10 <= x_lo < x_hi <= L/2");

  auto quantity_at = [&](int j) {
    return quantity == TailQuantity::profile_defect ? 1.0 - p.phi[j] : p.dphi[j];
  };

  if (skip_crossings) {
    // Walk inward from L/2 until phi' or 1 - phi changes sign.
    int j = g.center();
    while (j + 1 < g.size() && g.node(j + 1) <= half) ++j;
    const double s_d = std::copysign(1.0, p.dphi[j]);
    const double s_q = std::copysign(1.0, 1.0 - p.phi[j]);
    int k = j;
    while (k > g.center() && std::copysign(1.0, p.dphi[k - 1]) == s_d &&
           std::copysign(1.0, 1.0 - p.phi[k - 1]) == s_q)
      --k;
    const double last_crossing = g.node(k);
    if (last_crossing >= x_lo) x_lo = std::max(10.0, std::ceil(last_crossing) + 1.0);
    if (!(x_lo < x_hi))
      throw std::invalid_argument("fit_tail: last crossing lies beyond the window");
  }

  std::vector<double> xs, qs;
  double sign = 0.0;
  for (int j = g.center(); j < g.size(); ++j) {
    const double x = g.node(j);
    if (x < x_lo || x > x_hi) continue;
    const double q = quantity_at(j);
    if (q == 0.0) throw std::domain_error("fit_tail: quantity vanishes in window");
    const double s = std::copysign(1.0, q);
    if (sign == 0.0) sign = s;
    if (s != sign)
      throw std::domain_error(
          "fit_tail: quantity changes sign in window; start beyond the last crossing");
    xs.push_back(x);
    qs.push_back(q);
  }
  const int n = static_cast<int>(xs.size());
  if (n < 20) throw std::invalid_argument("fit_tail: fewer than 20 nodes in window");

  LogLine line = loglog(xs, qs);
  const double raw_slope = line.slope;
  if (image_correction) {
    // Self-consistent removal of the neighbouring lattice kinks' tails,
    // modelled by the power law fitted to the corrected data itself.
    std::vector<double> corrected(n);
    for (int iter = 0; iter < 100; ++iter) {
      const double amp = sign * std::exp(line.intercept);
      const double pw = -line.slope;
      for (int i = 0; i < n; ++i)
        corrected[i] = qs[i] + image_sum(quantity, amp, pw, xs[i], g.half_length());
      for (double c : corrected)
        if (std::copysign(1.0, c) != sign)
          throw std::domain_error("fit_tail: image correction flips the tail sign");
      const LogLine next = loglog(xs, corrected);
      const bool done = std::abs(next.slope - line.slope) < 1e-12 &&
                        std::abs(next.intercept - line.intercept) < 1e-12;
      line = next;
      if (done) break;
    }
  }
  const double slope = line.slope;
  const double intercept = line.intercept;
  const double mx = line.mean_log_x;
  const double mq = line.mean_log_q;

  TailFit fit{};
  fit.x_lo = x_lo;
  fit.x_hi = x_hi;
  fit.nodes = n;
  fit.quantity = quantity;
  fit.fitted_exponent = slope;
  fit.raw_exponent = raw_slope;
  fit.image_corrected = image_correction;
  fit.fitted_prefactor = sign * std::exp(intercept);
  fit.expected_exponent =
      quantity == TailQuantity::profile_defect ? -p.alpha : -1.0 - p.alpha;
  fit.rel_exponent_err = std::abs(slope - fit.expected_exponent) /
                         std::abs(fit.expected_exponent);
  fit.pinned_prefactor = sign * std::exp(mq - fit.expected_exponent * mx);

  const bool has_law = p.alpha > 1.0 && p.alpha < 4.0 &&
                       std::abs(p.alpha - 2.0) >= kEndpointExclusion;
  if (has_law) {
    fit.law = tail_law(p.alpha);
    fit.expected_prefactor = quantity == TailQuantity::profile_defect
                                 ? fit.law->profile_prefactor
                                 : fit.law->derivative_prefactor;
    fit.rel_prefactor_err = std::abs(fit.fitted_prefactor - fit.expected_prefactor) /
                            std::abs(fit.expected_prefactor);
    fit.rel_pinned_prefactor_err =
        std::abs(fit.pinned_prefactor - fit.expected_prefactor) /
        std::abs(fit.expected_prefactor);
  } else {
    fit.expected_prefactor = std::nan("");
    fit.rel_prefactor_err = std::nan("");
    fit.rel_pinned_prefactor_err = std::nan("");
  }
  return fit;
}

double flux_identity(const KinkProfile& p) {
  RealField weight(p.grid);
  for (int j = 0; j < p.grid.size(); ++j) weight[j] = 1.0 - p.phi[j] * p.phi[j];
  return inner(weight, p.dphi);
}

}  // namespace fk
