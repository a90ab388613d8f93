#include "fkink/specops.hpp"

#include <fftw3.h>

#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace fk {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW plans are created once per size under a lock; execution with the
// new-array interface is thread safe.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair get(int n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    double* re = fftw_alloc_real(n);
    fftw_complex* co = fftw_alloc_complex(n / 2 + 1);
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(n, re, co, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r_1d(n, co, re, FFTW_ESTIMATE);
    fftw_free(re);
    fftw_free(co);
    plans_.emplace(n, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

// Scratch buffers with FFTW alignment.
struct Spectrum {
  explicit Spectrum(int n)
      : n(n),
        real(fftw_alloc_real(n), fftw_free),
        coef(fftw_alloc_complex(n / 2 + 1), fftw_free) {}

  void forward(std::span<const double> in) {
    std::copy(in.begin(), in.end(), real.get());
    fftw_execute_dft_r2c(PlanCache::instance().get(n).forward, real.get(),
                         coef.get());
  }
  // Inverse including the 1/N factor.
  void backward(std::span<double> out) {
    fftw_execute_dft_c2r(PlanCache::instance().get(n).backward, coef.get(),
                         real.get());
    const double inv = 1.0 / n;
    for (int j = 0; j < n; ++j) out[j] = real.get()[j] * inv;
  }
  std::complex<double> get(int k) const {
    return {coef.get()[k][0], coef.get()[k][1]};
  }
  void set(int k, std::complex<double> z) {
    coef.get()[k][0] = z.real();
    coef.get()[k][1] = z.imag();
  }

  int n;
  std::unique_ptr<double, decltype(&fftw_free)> real;
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> coef;
};

void require_finite(const RealField& f) {
  if (!f.all_finite()) throw std::domain_error("field has non-finite entries");
}

}  // namespace

Grid::Grid(double half_length, int n_points)
    : half_length_(half_length), n_(n_points) {
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw std::invalid_argument("grid half length must be positive");
  if (n_points < 16 || n_points % 2 != 0)
    throw std::invalid_argument("grid size must be even and >= 16");
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(n_);
  for (int j = 0; j < n_; ++j) x[j] = node(j);
  return x;
}

RealField::RealField(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

RealField::RealField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size())
    throw std::invalid_argument("field length does not match grid");
}

RealField& RealField::operator+=(const RealField& o) {
  require_same_grid(*this, o);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
  return *this;
}

RealField& RealField::operator-=(const RealField& o) {
  require_same_grid(*this, o);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
  return *this;
}

RealField& RealField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

RealField& RealField::axpy(double s, const RealField& o) {
  require_same_grid(*this, o);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += s * o.values_[j];
  return *this;
}

bool RealField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

double RealField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double s, RealField a) { return a *= s; }

RealField hadamard(const RealField& a, const RealField& b) {
  require_same_grid(a, b);
  RealField out(a.grid());
  for (int j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

double RieszSymbol::operator()(double xi) const {
  const double k = 2.0 * kPi * std::abs(xi);
  double s = mass + std::pow(k, order);
  if (second_order) s += (1.0 - speed * speed) * k * k;
  return s;
}

RieszSymbol pure_riesz(double order) { return RieszSymbol{order, 0.0, false, 0.0}; }

void require_same_grid(const RealField& a, const RealField& b) {
  if (!(a.grid() == b.grid())) {
    std::ostringstream os;
    os << "grid mismatch: (L=" << a.grid().half_length() << ", N=" << a.grid().size()
       << ") vs (L=" << b.grid().half_length() << ", N=" << b.grid().size() << ")";
    throw std::invalid_argument(os.str());
  }
}

std::vector<std::complex<double>> fourier_coefficients(const RealField& f) {
  require_finite(f);
  const Grid& g = f.grid();
  Spectrum sp(g.size());
  sp.forward(f.values());
  std::vector<std::complex<double>> c(g.n_coefficients());
  const double h = g.spacing();
  // x_0 = -L contributes the phase exp(i pi k) = (-1)^k.
  for (int k = 0; k < g.n_coefficients(); ++k)
    c[k] = sp.get(k) * (k % 2 == 0 ? h : -h);
  return c;
}

RealField from_fourier_coefficients(const Grid& grid,
                                    std::span<const std::complex<double>> c) {
  if (static_cast<int>(c.size()) != grid.n_coefficients())
    throw std::invalid_argument("coefficient count does not match grid");
  Spectrum sp(grid.size());
  const double h = grid.spacing();
  for (int k = 0; k < grid.n_coefficients(); ++k)
    sp.set(k, c[k] * (k % 2 == 0 ? 1.0 / h : -1.0 / h));
  RealField out(grid);
  sp.backward(out.values());
  return out;
}

RealField apply_multiplier(const RealField& f,
                           const std::function<double(double)>& multiplier,
                           bool keep_nyquist) {
  require_finite(f);
  const Grid& g = f.grid();
  Spectrum sp(g.size());
  sp.forward(f.values());
  const int nyq = g.size() / 2;
  for (int k = 0; k < nyq; ++k) sp.set(k, sp.get(k) * multiplier(g.frequency(k)));
  sp.set(nyq, keep_nyquist ? sp.get(nyq) * multiplier(g.frequency(nyq)) : 0.0);
  RealField out(g);
  sp.backward(out.values());
  return out;
}

RealField apply_symbol(const RealField& f, const RieszSymbol& sym) {
  return apply_multiplier(f, [&](double xi) { return sym(xi); });
}

RealField solve_symbol(const RealField& f, const RieszSymbol& sym) {
  return apply_multiplier(f, [&](double xi) { return 1.0 / sym(xi); });
}

RealField derivative(const RealField& f, int order) {
  require_finite(f);
  if (order < 0) throw std::invalid_argument("negative derivative order");
  const Grid& g = f.grid();
  Spectrum sp(g.size());
  sp.forward(f.values());
  const int nyq = g.size() / 2;
  for (int k = 0; k < nyq; ++k) {
    const std::complex<double> ik(0.0, 2.0 * kPi * g.frequency(k));
    sp.set(k, sp.get(k) * std::pow(ik, order));
  }
  sp.set(nyq, 0.0);
  RealField out(g);
  sp.backward(out.values());
  return out;
}

RealField shift(const RealField& f, double s) {
  require_finite(f);
  const Grid& g = f.grid();
  Spectrum sp(g.size());
  sp.forward(f.values());
  const int nyq = g.size() / 2;
  for (int k = 0; k < nyq; ++k)
    sp.set(k, sp.get(k) * std::polar(1.0, 2.0 * kPi * g.frequency(k) * s));
  sp.set(nyq, 0.0);
  RealField out(g);
  sp.backward(out.values());
  return out;
}

double riesz_singular_constant(double s) {
  return std::pow(2.0, s) * std::tgamma(0.5 * (1.0 + s)) * s /
         (2.0 * std::sqrt(kPi) * std::tgamma(1.0 - 0.5 * s));
}

RealField apply_riesz_singular(const RealField& f, double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("singular-integral D^s requires s in (0,1)");
  require_finite(f);
  const Grid& g = f.grid();
  const int n = g.size();
  const double h = g.spacing();
  const double cs = riesz_singular_constant(s);
  auto at = [&](int j) { return (j >= 0 && j < n) ? f[j] : 0.0; };

  // Symmetrized integrand G(z) = [2u(x) - u(x+z) - u(x-z)] / z^{1+s}
  // = z^{1-s} (a0 + a1 z^2 + ...), a0 = -u'', a1 = -u''''/12. The trapezoid
  // sum over z = jh misses the generalized Euler-Maclaurin terms
  // zeta(-beta) h^{beta+1} a_k with beta = 1-s+2k.
  const double z1 = boost::math::zeta(s - 1.0);
  const double z3 = boost::math::zeta(s - 3.0);
  // Trapezoid weights z_j^{-1-s}; the sum over j of w_j (u(x+z_j) + u(x-z_j))
  // is a linear convolution, evaluated by zero-padded FFT.
  const int m = 2 * n;
  std::vector<double> kernel(m, 0.0), padded(m, 0.0);
  double weight_sum = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double w = ((j == n) ? 0.5 : 1.0) * std::pow(j * h, -1.0 - s);
    weight_sum += w;
    if (j < n) kernel[j] = kernel[m - j] = w;
  }
  std::copy(f.values().begin(), f.values().end(), padded.begin());
  Spectrum sk(m), sf(m);
  sk.forward(kernel);
  sf.forward(padded);
  for (int k = 0; k <= m / 2; ++k) sf.set(k, sf.get(k) * sk.get(k));
  sf.backward(padded);

  RealField out(g);
  for (int i = 0; i < n; ++i) {
    const double u = f[i];
    double sum = h * (2.0 * u * weight_sum - padded[i]);
    // beyond z = 2L the integrand is exactly 2u(x)/z^{1+s}
    sum += 2.0 * u * std::pow(n * h, -s) / s;

    const double d2 = (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * u + 16.0 * at(i - 1) -
                       at(i - 2)) / (12.0 * h * h);
    const double d4 = (at(i + 2) - 4.0 * at(i + 1) + 6.0 * u - 4.0 * at(i - 1) +
                       at(i - 2)) / (h * h * h * h);
    sum -= z1 * std::pow(h, 2.0 - s) * (-d2);
    sum -= z3 * std::pow(h, 4.0 - s) * (-d4 / 12.0);
    out[i] = cs * sum;
  }
  return out;
}

double inner(const RealField& f, const RealField& g) {
  require_same_grid(f, g);
  double s = 0.0;
  for (int j = 0; j < f.size(); ++j) s += f[j] * g[j];
  return s * f.grid().spacing();
}

double norm(const RealField& f) { return std::sqrt(inner(f, f)); }

RealField odd_part(const RealField& f) {
  const Grid& g = f.grid();
  RealField out(g);
  for (int j = 0; j < g.size(); ++j) out[j] = 0.5 * (f[j] - f[g.mirror(j)]);
  return out;
}

RealField even_part(const RealField& f) {
  const Grid& g = f.grid();
  RealField out(g);
  for (int j = 0; j < g.size(); ++j) out[j] = 0.5 * (f[j] + f[g.mirror(j)]);
  return out;
}

double odd_defect(const RealField& f) {
  double m = 0.0;
  for (int j = 0; j < f.size(); ++j)
    m = std::max(m, std::abs(f[j] + f[f.grid().mirror(j)]));
  return m;
}

double even_defect(const RealField& f) {
  double m = 0.0;
  for (int j = 0; j < f.size(); ++j)
    m = std::max(m, std::abs(f[j] - f[f.grid().mirror(j)]));
  return m;
}

}  // namespace fk
