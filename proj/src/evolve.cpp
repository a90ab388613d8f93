#include "fkink/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fkink/quadrature.hpp"

namespace fk {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dt(double dt) {
  if (!(dt > 0.0 && dt <= 0.4))
    throw std::invalid_argument("step: dt must lie in (0, 0.4]");
}

void check_sign(int b) {
  if (b < -1 || b > 1) throw std::invalid_argument("background sign must be -1, 0 or 1");
}

// Pieces that stay fixed along a trajectory.
struct Flow {
  Flow(const Grid& g, double alpha, int b)
      : alpha(alpha),
        b(b),
        w_bg(background(g)),
        action(background_action(g, alpha, 0.0, false)),
        self_energy(b == 0 ? 0.0 : background_energy(alpha)) {}

  RealField advance(const RealField& w, double dt) const {
    RealField rhs = w;
    for (int j = 0; j < w.size(); ++j) {
      const double u = b * w_bg[j] + w[j];
      rhs[j] += dt * (u - u * u * u) - dt * b * action[j];
    }
    const RieszSymbol sym = pure_riesz(alpha);
    RealField out = apply_multiplier(rhs, [&](double xi) { return 1.0 / (1.0 + dt * sym(xi)); });
    if (!out.all_finite()) throw std::domain_error("step: non-finite state");
    return out;
  }

  // Linearly implicit Euler: (I + dt J) d = -dt F(w), J = D^alpha + 3u^2 - 1.
  // Near the kink its propagator is (I + dt L)^{-1}, a function of L.
  RealField advance_linearized(const RealField& w, double dt) const {
    const RieszSymbol sym = pure_riesz(alpha);
    RealField f = apply_symbol(w, sym);
    RealField pot(w.grid());
    for (int j = 0; j < w.size(); ++j) {
      const double u = b * w_bg[j] + w[j];
      f[j] += b * action[j] + u * u * u - u;
      pot[j] = 3.0 * u * u - 1.0;
    }
    auto apply_a = [&](const RealField& x) {
      RealField out = apply_multiplier(x, [&](double xi) { return 1.0 + dt * sym(xi); }, true);
      out.axpy(dt, hadamard(pot, x));
      return out;
    };
    auto precondition = [&](const RealField& r) {
      return apply_multiplier(r, [&](double xi) { return 1.0 / (1.0 + dt * (sym(xi) + 2.0)); },
                              true);
    };
    RealField rhs = -dt * f;
    RealField d(w.grid());
    RealField r = rhs;
    RealField z = precondition(r);
    RealField p = z;
    double rz = inner(r, z);
    const double stop = 1e-14 * std::max(norm(rhs), 1e-300);
    for (int it = 0; it < 500 && norm(r) > stop; ++it) {
      const RealField ap = apply_a(p);
      const double a = rz / inner(p, ap);
      d.axpy(a, p);
      r.axpy(-a, ap);
      z = precondition(r);
      const double rz_new = inner(r, z);
      p *= rz_new / rz;
      p += z;
      rz = rz_new;
    }
    RealField out = w + d;
    // same band as the IMEX step: no Nyquist content
    out = apply_multiplier(out, [](double) { return 1.0; });
    if (!out.all_finite()) throw std::domain_error("step: non-finite state");
    return out;
  }

  double energy(const RealField& w) const {
    const double grad = 0.5 * inner(apply_symbol(w, pure_riesz(alpha)), w);
    double pot = 0.0;
    for (int j = 0; j < w.size(); ++j) {
      const double u = b * w_bg[j] + w[j];
      const double d = 1.0 - u * u;
      pot += d * d;
    }
    pot *= 0.25 * w.grid().spacing();
    return self_energy + b * inner(action, w) + grad + pot;
  }

  double alpha;
  int b;
  RealField w_bg;
  RealField action;
  double self_energy;
};

}  // namespace

RealField step(const RealField& w, double dt, double alpha, int background_sign) {
  check_dt(dt);
  check_sign(background_sign);
  if (!w.all_finite()) throw std::domain_error("step: non-finite state");
  return Flow(w.grid(), alpha, background_sign).advance(w, dt);
}

double background_energy(double alpha) {
  // |FT W|^2 (2 pi xi)^alpha = (2 pi xi)^alpha 2 pi^2 / sinh^2(sqrt2 pi^2 xi)
  const double a = std::numbers::sqrt2 * kPi * kPi;
  const double half_line = integrate_half_line_real([&](double xi) {
    const double s = std::sinh(a * xi);
    return std::pow(2.0 * kPi * xi, alpha) * 2.0 * kPi * kPi / (s * s);
  });
  // 1/2 * (integral over the whole line) = half-line value
  return half_line;
}

double energy(const RealField& w, double alpha, int background_sign) {
  check_sign(background_sign);
  return Flow(w.grid(), alpha, background_sign).energy(w);
}

RealField translate(const KinkProfile& phi, double sigma) {
  RealField out = background(phi.grid, 0, sigma) - background(phi.grid);
  out += shift(phi.correction, sigma);
  return out;
}

Decomposition decompose(const RealField& w, const KinkProfile& phi, double sigma_guess,
                        Frame frame) {
  require_same_grid(w, phi.phi);
  if (!w.all_finite()) throw DecompositionError("decompose: non-finite state");
  if (norm(w - translate(phi, sigma_guess)) > kDecompositionRadius)
    throw DecompositionError("decompose: perturbation exceeds the decomposition radius");
  const RealField dv = derivative(phi.correction);
  const RealField d2v = derivative(phi.correction, 2);
  const double scale = inner(phi.dphi, phi.dphi);
  auto shifted_dphi = [&](double s) { return background(phi.grid, 1, s) + shift(dv, s); };
  auto direction = [&](double s) {
    return frame == Frame::shifted ? shifted_dphi(s) : phi.dphi;
  };
  double sigma = sigma_guess;
  for (int it = 0; it < 50; ++it) {
    const RealField v = w - translate(phi, sigma);
    const RealField e = direction(sigma);
    const double g = inner(v, e);
    double dg = -inner(shifted_dphi(sigma), e);
    if (frame == Frame::shifted)
      dg += inner(v, background(phi.grid, 2, sigma) + shift(d2v, sigma));
    if (!(std::abs(dg) > 0.1 * scale))
      throw DecompositionError("decompose: orthogonality root is not locally unique");
    const double delta = -g / dg;
    sigma += delta;
    if (std::abs(sigma - sigma_guess) > 2.0)
      throw DecompositionError("decompose: shift left the modulation neighbourhood");
    if (std::abs(delta) <= 1e-15 * std::max(1.0, std::abs(sigma))) break;
  }
  RealField v = w - translate(phi, sigma);
  const double orth = std::abs(inner(v, direction(sigma)));
  // Newton may stall at round-off; the constraint is what matters
  if (orth > 1e-10) throw DecompositionError("decompose: Newton on sigma did not converge");
  return Decomposition{sigma, std::move(v), orth};
}

PerturbationKind parse_perturbation(const std::string& name) {
  if (name == "odd") return PerturbationKind::odd;
  if (name == "even") return PerturbationKind::even;
  if (name == "random") return PerturbationKind::random;
  throw std::invalid_argument("perturbation must be odd, even or random (got '" + name + "')");
}

std::string to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::odd: return "odd";
    case PerturbationKind::even: return "even";
    default: return "random";
  }
}

RealField perturbation(const Grid& grid, PerturbationKind kind, double amplitude,
                       std::uint64_t seed) {
  switch (kind) {
    case PerturbationKind::odd:
      return RealField::sample(
          grid, [&](double x) { return amplitude * x * std::exp(0.5 * (1.0 - x * x)); });
    case PerturbationKind::even:
      return RealField::sample(grid,
                               [&](double x) { return amplitude * std::exp(-0.5 * x * x); });
    case PerturbationKind::random: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> centre(-5.0, 5.0);
      std::normal_distribution<double> weight;
      double c[5], a[5];
      for (int i = 0; i < 5; ++i) {
        c[i] = centre(rng);
        a[i] = weight(rng);
      }
      RealField f = RealField::sample(grid, [&](double x) {
        double s = 0.0;
        for (int i = 0; i < 5; ++i) s += a[i] * std::exp(-0.5 * (x - c[i]) * (x - c[i]));
        return s;
      });
      f *= amplitude / f.max_abs();
      return f;
    }
  }
  throw std::invalid_argument("unknown perturbation kind");
}

LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
  LineFit fit;
  const std::size_t n = t.size();
  fit.points = static_cast<int>(n);
  if (n < 3) return fit;
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    sty += (t[i] - mt) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  fit.slope = sty / stt;
  fit.intercept = my - fit.slope * mt;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - fit.intercept - fit.slope * t[i];
    sse += e * e;
  }
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

EvolutionTrace run(const RealField& w0, const KinkProfile& phi, double T, double dt,
                   const RunOptions& options, std::string descriptor) {
  check_dt(dt);
  if (!(T > 0.0)) throw std::invalid_argument("run: T must be positive");
  if (phi.traveling) throw std::invalid_argument("run: the parabolic flow needs a stationary kink");
  const Flow flow(phi.grid, phi.alpha, 1);
  const int steps = static_cast<int>(std::lround(T / dt));
  const int every = std::max(1, static_cast<int>(std::lround(options.sample_interval / dt)));
  RieszSymbol hsym = pure_riesz(phi.alpha);
  hsym.mass = 1.0;

  EvolutionTrace tr{};
  tr.alpha = phi.alpha;
  tr.dt = dt;
  tr.T = steps * dt;
  tr.descriptor = std::move(descriptor);
  tr.max_energy_increase = -std::numeric_limits<double>::infinity();

  RealField w = w0;
  double last_sigma = 0.0;
  auto sample = [&](double t, double e) {
    Decomposition d = [&] {
      try {
        return decompose(w, phi, last_sigma, options.frame);
      } catch (const DecompositionError& err) {
        throw DecompositionError(err.what(), t);
      }
    }();
    last_sigma = d.sigma;
    tr.times.push_back(t);
    tr.norm_l2.push_back(norm(d.v));
    tr.norm_h.push_back(std::sqrt(std::max(0.0, inner(apply_symbol(d.v, hsym), d.v))));
    tr.energies.push_back(e);
    tr.sigma.push_back(d.sigma);
    tr.orthogonality.push_back(d.orthogonality);
  };

  double e_prev = flow.energy(w);
  sample(0.0, e_prev);
  for (int n = 1; n <= steps; ++n) {
    w = options.scheme == Scheme::imex ? flow.advance(w, dt) : flow.advance_linearized(w, dt);
    const double e = flow.energy(w);
    tr.max_energy_increase = std::max(tr.max_energy_increase, e - e_prev);
    e_prev = e;
    if (n % every == 0 || n == steps) sample(n * dt, e);
  }

  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double t = tr.times[i];
    if (t >= options.decay_from * tr.T - 1e-9 && t <= options.decay_to * tr.T + 1e-9 &&
        tr.norm_l2[i] > 0.0) {
      ts.push_back(t);
      ys.push_back(std::log(tr.norm_l2[i]));
    }
  }
  tr.decay_fit = fit_line(ts, ys);
  tr.kappa_fit = -tr.decay_fit.slope;

  ts.clear();
  ys.clear();
  const double s_end = tr.sigma.back();
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double t = tr.times[i];
    const double d = std::abs(tr.sigma[i] - s_end);
    if (t >= options.shift_from * tr.T - 1e-9 && t <= options.shift_to * tr.T + 1e-9 &&
        t < tr.T && d > 0.0) {
      ts.push_back(t);
      ys.push_back(std::log(d));
    }
  }
  tr.shift_fit = fit_line(ts, ys);
  tr.shift_rate = -tr.shift_fit.slope;
  return tr;
}

}  // namespace fk
