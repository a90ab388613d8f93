#include "fkink/spectrum.hpp"

#include <lapacke.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace fk {

namespace {

// Keeping the Nyquist entry makes L symmetric on the whole grid space;
// the alternating mode (-1)^j is then an eigenvector of the symbol part.
RealField apply_full(const RealField& f, const std::function<double(double)>& m) {
  return apply_multiplier(f, m, true);
}

RealField project(const RealField& f, Parity p) {
  switch (p) {
    case Parity::even: return even_part(f);
    case Parity::odd: return odd_part(f);
    default: return f;
  }
}

Parity classify(const RealField& v) {
  const double scale = v.max_abs();
  if (odd_defect(v) <= 1e-6 * scale) return Parity::odd;
  if (even_defect(v) <= 1e-6 * scale) return Parity::even;
  return Parity::mixed;
}

void normalize_sign(RealField& v) {
  int jm = 0;
  for (int j = 1; j < v.size(); ++j)
    if (std::abs(v[j]) > std::abs(v[jm])) jm = j;
  if (v[jm] < 0.0) v *= -1.0;
}

struct SectorResult {
  std::vector<double> values;
  std::vector<RealField> vectors;
  std::vector<double> residuals;
  int matvecs = 0;
};

int sector_dimension(const Grid& g, Parity p) {
  switch (p) {
    case Parity::even: return g.size() / 2 + 1;
    case Parity::odd: return g.size() / 2 - 1;
    default: return g.size();
  }
}

SectorResult lanczos(const LinearizedOperator& op, int k, Parity parity,
                     const SpectrumOptions& opt) {
  const Grid& g = op.grid();
  const int n = g.size();
  const int dim = sector_dimension(g, parity);
  k = std::min(k, dim);
  const double s = -opt.shift;

  std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(parity));
  std::normal_distribution<double> normal;
  RealField start(g);
  for (int j = 0; j < n; ++j) start[j] = normal(rng);
  start = project(start, parity);

  auto to_vec = [&](const RealField& f) {
    Eigen::VectorXd v(n);
    for (int j = 0; j < n; ++j) v[j] = f[j];
    return v;
  };
  auto to_field = [&](const Eigen::VectorXd& v) {
    RealField f(g);
    for (int j = 0; j < n; ++j) f[j] = v[j];
    return f;
  };

  std::vector<Eigen::VectorXd> q;
  std::vector<double> diag, off;
  Eigen::VectorXd cur = to_vec(start);
  cur.normalize();
  q.push_back(cur);

  SectorResult res;
  const int limit = std::min(opt.max_lanczos, dim);
  for (int j = 0; j < limit; ++j) {
    Eigen::VectorXd w = to_vec(project(op.solve_shifted(to_field(q[j]), s), parity));
    ++res.matvecs;
    const double a = q[j].dot(w);
    diag.push_back(a);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& qi : q) w -= qi.dot(w) * qi;
    const double b = w.norm();
    const int m = j + 1;
    const bool exhausted = m == dim || b < 1e-13;
    const bool check = m >= k && (m % 5 == 0 || exhausted || m == limit);
    if (check) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) t(i, i) = diag[i];
      for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = off[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      // largest Ritz values of the inverse are the smallest eigenvalues of L
      bool ready = true;
      for (int i = 0; i < k; ++i) {
        const int c = m - 1 - i;
        if (std::abs(b * es.eigenvectors()(m - 1, c)) > 1e-12 * std::abs(es.eigenvalues()[c]))
          ready = false;
      }
      if (ready || exhausted || m == limit) {
        std::vector<double> vals;
        std::vector<RealField> vecs;
        std::vector<double> resid;
        bool ok = true;
        for (int i = 0; i < k; ++i) {
          const int c = m - 1 - i;
          Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
          for (int r = 0; r < m; ++r) y += es.eigenvectors()(r, c) * q[r];
          RealField v = to_field(y);
          v *= 1.0 / norm(v);
          const RealField lv = op.apply(v);
          const double lambda = inner(lv, v);
          RealField r = lv;
          r.axpy(-lambda, v);
          const double rn = norm(r);
          if (rn > opt.residual_tol) ok = false;
          normalize_sign(v);
          vals.push_back(lambda);
          vecs.push_back(std::move(v));
          resid.push_back(rn);
        }
        if (ok) {
          std::vector<int> idx(k);
          std::iota(idx.begin(), idx.end(), 0);
          std::sort(idx.begin(), idx.end(), [&](int x, int y) { return vals[x] < vals[y]; });
          for (int i : idx) {
            res.values.push_back(vals[i]);
            res.vectors.push_back(vecs[i]);
            res.residuals.push_back(resid[i]);
          }
          return res;
        }
        if (exhausted) break;
      }
    }
    off.push_back(b);
    q.push_back(w / b);
  }
  throw ConvergenceError("low_spectrum: Lanczos did not converge within " +
                         std::to_string(opt.max_lanczos) + " solves");
}

// Free dispersion along the grid frequencies; k is the mode index.
double free_level(const RieszSymbol& sym, double half_length, double k) {
  return sym(k / (2.0 * half_length));
}

double free_index(const RieszSymbol& sym, double half_length, double lambda) {
  if (lambda <= sym(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (free_level(sym, half_length, hi) < lambda) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (free_level(sym, half_length, mid) < lambda ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::optional<double> edge_in(const std::vector<double>& mu, const RieszSymbol& sym,
                              double half_length) {
  constexpr int kRun = 5;
  for (std::size_t i = 0; i + kRun < mu.size(); ++i) {
    bool run = true;
    for (int r = 0; r < kRun && run; ++r) {
      const double kf = free_index(sym, half_length, mu[i + r]);
      const double free_gap =
          free_level(sym, half_length, kf + 1.0) - free_level(sym, half_length, kf);
      const double ratio = (mu[i + r + 1] - mu[i + r]) / free_gap;
      run = ratio >= 0.8 && ratio <= 1.2;
    }
    if (run) return mu[i];
  }
  return std::nullopt;
}

}  // namespace

LinearizedOperator::LinearizedOperator(Grid grid, double alpha, RieszSymbol symbol,
                                       RealField potential,
                                       std::optional<KinkProfile> profile)
    : grid_(grid),
      alpha_(alpha),
      symbol_(symbol),
      potential_(std::move(potential)),
      profile_(std::move(profile)) {}

LinearizedOperator::LinearizedOperator(const KinkProfile& p)
    : LinearizedOperator(p.grid, p.alpha, kink_symbol(p.alpha, p.c, p.traveling),
                         RealField(p.grid), p) {
  symbol_.mass = 2.0;
  for (int j = 0; j < grid_.size(); ++j) potential_[j] = -3.0 * (1.0 - p.phi[j] * p.phi[j]);
}

LinearizedOperator LinearizedOperator::free(const Grid& grid, double alpha, double mass) {
  RieszSymbol sym = pure_riesz(alpha);
  sym.mass = mass;
  return LinearizedOperator(grid, alpha, sym, RealField(grid), std::nullopt);
}

RealField LinearizedOperator::apply(const RealField& f) const {
  require_same_grid(f, potential_);
  RealField out = apply_full(f, [this](double xi) { return symbol_(xi); });
  out += hadamard(potential_, f);
  return out;
}

RealField LinearizedOperator::apply_symbol_inverse(const RealField& f, double shift) const {
  return apply_full(f, [this, shift](double xi) { return 1.0 / (symbol_(xi) + shift); });
}

RealField LinearizedOperator::solve_shifted(const RealField& f, double shift, double rtol,
                                            int max_iter) const {
  RealField x(grid_);
  RealField r = f;
  const double bn = norm(f);
  if (bn == 0.0) return x;
  RealField z = apply_symbol_inverse(r, shift);
  RealField p = z;
  double rz = inner(r, z);
  for (int it = 0; it < max_iter; ++it) {
    RealField ap = apply(p);
    ap.axpy(shift, p);
    const double pap = inner(p, ap);
    if (!(pap > 0.0)) throw ConvergenceError("solve_shifted: operator not positive definite");
    const double a = rz / pap;
    x.axpy(a, p);
    r.axpy(-a, ap);
    if (norm(r) <= rtol * bn) return x;
    z = apply_symbol_inverse(r, shift);
    const double rz_new = inner(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    RealField np = z;
    np.axpy(beta, p);
    p = std::move(np);
  }
  throw ConvergenceError("solve_shifted: conjugate gradients did not converge");
}

std::vector<double> LinearizedOperator::dense() const {
  const int n = grid_.size();
  if (n > kDenseLimit) throw std::length_error("dense operator: N exceeds the dense limit");
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  RealField e(grid_);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    const RealField col = apply(e);
    e[j] = 0.0;
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * n + j] = col[i];
  }
  return a;
}

LinearizedOperator assemble(const KinkProfile& profile) { return LinearizedOperator(profile); }

SpectrumReport low_spectrum(const LinearizedOperator& op, int k, const SpectrumOptions& opt) {
  if (k < 1 || k > 10) throw std::invalid_argument("low_spectrum: k must lie in [1, 10]");
  SpectrumReport rep{};
  rep.alpha = op.alpha();
  rep.half_length = op.grid().half_length();
  rep.symbol = op.symbol();
  std::vector<double> vals;
  std::vector<RealField> vecs;
  std::vector<double> resid;
  std::vector<Parity> par;
  auto take = [&](SectorResult&& s, Parity p) {
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      vals.push_back(s.values[i]);
      vecs.push_back(std::move(s.vectors[i]));
      resid.push_back(s.residuals[i]);
      par.push_back(p == Parity::mixed ? classify(vecs.back()) : p);
    }
    rep.matvecs += s.matvecs;
  };
  if (opt.split_parity) {
    SectorResult even = lanczos(op, k, Parity::even, opt);
    SectorResult odd = lanczos(op, k, Parity::odd, opt);
    rep.even_eigenvalues = even.values;
    rep.odd_eigenvalues = odd.values;
    take(std::move(even), Parity::even);
    take(std::move(odd), Parity::odd);
  } else {
    SectorResult all = lanczos(op, k, Parity::mixed, opt);
    rep.unsplit_eigenvalues = all.values;
    take(std::move(all), Parity::mixed);
  }
  std::vector<int> idx(vals.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
  idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(k)));
  for (int i : idx) {
    rep.eigenvalues.push_back(vals[i]);
    rep.eigenvectors.push_back(vecs[i]);
    rep.residuals.push_back(resid[i]);
    rep.parity.push_back(par[i]);
  }
  rep.ground_alignment = std::numeric_limits<double>::quiet_NaN();
  if (op.profile()) {
    const RealField& dphi = op.profile()->dphi;
    rep.ground_alignment =
        std::abs(inner(rep.eigenvectors[0], dphi)) / (norm(rep.eigenvectors[0]) * norm(dphi));
  }
  rep.uniqueness_verdict = uniqueness_check(rep).lambda1_above_one;
  return rep;
}

double rayleigh_quotient(const LinearizedOperator& op, const RealField& f) {
  const double ff = inner(f, f);
  if (!(ff > 0.0)) throw std::invalid_argument("rayleigh_quotient: zero field");
  return inner(op.apply(f), f) / ff;
}

std::vector<double> dense_spectrum(const LinearizedOperator& op) {
  const int n = op.grid().size();
  const std::vector<double> a = op.dense();
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      a.data(), n, n);
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

UniquenessVerdict uniqueness_check(const SpectrumReport& rep) {
  if (rep.eigenvalues.size() < 2)
    throw std::invalid_argument("uniqueness_check: need at least two eigenvalues");
  UniquenessVerdict v{};
  v.lambda1 = rep.eigenvalues[1];
  v.margin = 3.0 * *std::max_element(rep.residuals.begin(), rep.residuals.end());
  v.lambda1_above_one = v.lambda1 > 1.0 + v.margin;
  const RealField& g = rep.eigenvectors[0];
  const double floor = 1e-10 * g.max_abs();
  double lo = 0.0, hi = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    lo = std::min(lo, g[j]);
    hi = std::max(hi, g[j]);
  }
  v.ground_sign_definite = lo >= -floor || hi <= floor;
  v.sign_change_permitted = rep.alpha > 2.0;
  return v;
}

double essential_edge(const SpectrumReport& rep) {
  const RieszSymbol& sym = rep.symbol;
  std::optional<double> best;
  for (const auto* list : {&rep.even_eigenvalues, &rep.odd_eigenvalues}) {
    if (auto e = edge_in(*list, sym, rep.half_length))
      best = best ? std::min(*best, *e) : *e;
  }
  if (!best) throw std::runtime_error("essential_edge: no clustering detected (k too small)");
  return *best;
}

double spectral_gap(const SpectrumReport& rep) {
  try {
    return std::min(rep.eigenvalues.at(1), essential_edge(rep));
  } catch (const std::runtime_error&) {
    return rep.eigenvalues.at(1);
  }
}

WaveStabilityReport wave_stability(const KinkProfile& profile) {
  if (!(profile.alpha > 1.0 && profile.alpha <= 2.0))
    throw std::invalid_argument("wave_stability: alpha must lie in (1, 2]");
  if (!(std::abs(profile.c) < 1.0)) throw std::invalid_argument("wave_stability: |c| must be < 1");
  const int n = profile.grid.size();
  if (n > kDenseLimit) throw std::length_error("wave_stability: N exceeds the dense limit");
  const LinearizedOperator op(profile);
  const std::vector<double> l = op.dense();
  const int m = 2 * n;
  // column-major block matrix [[0, I], [-L, 2c D]]
  std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(j) * m + i]; };
  for (int i = 0; i < n; ++i) at(i, n + i) = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) at(n + i, j) = -l[static_cast<std::size_t>(i) * n + j];
  RealField e(profile.grid);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    const RealField col = derivative(e, 1);
    e[j] = 0.0;
    for (int i = 0; i < n; ++i) at(n + i, n + j) = 2.0 * profile.c * col[i];
  }
  std::vector<double> wr(m), wi(m);
  const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', m, a.data(), m, wr.data(),
                                        wi.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw ConvergenceError("wave_stability: dgeev failed");
  WaveStabilityReport rep;
  for (int i = 0; i < m; ++i) rep.eigenvalues.emplace_back(wr[i], wi[i]);
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
            [](auto x, auto y) { return std::abs(x) < std::abs(y); });
  rep.max_real_all = -std::numeric_limits<double>::infinity();
  rep.max_real = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    rep.max_real_all = std::max(rep.max_real_all, rep.eigenvalues[i].real());
    if (i >= 2) rep.max_real = std::max(rep.max_real, rep.eigenvalues[i].real());
  }
  return rep;
}

double wave_static_mismatch(const KinkProfile& profile, const WaveStabilityReport& report) {
  const std::vector<double> lam = dense_spectrum(LinearizedOperator(profile));
  std::vector<std::complex<double>> expected;
  for (std::size_t i = 1; i < lam.size(); ++i) {
    const double r = std::sqrt(std::max(lam[i], 0.0));
    expected.emplace_back(0.0, r);
    expected.emplace_back(0.0, -r);
  }
  std::vector<std::complex<double>> got(report.eigenvalues.begin() + 2, report.eigenvalues.end());
  if (got.size() != expected.size())
    throw std::invalid_argument("wave_static_mismatch: size mismatch");
  auto by_imag = [](auto x, auto y) { return x.imag() < y.imag(); };
  std::sort(expected.begin(), expected.end(), by_imag);
  std::sort(got.begin(), got.end(), by_imag);
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - expected[i]));
  return worst;
}

WaveStructure wave_structure_check(const KinkProfile& profile, int samples,
                                   std::uint64_t seed) {
  const LinearizedOperator op(profile);
  const Grid& g = profile.grid;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto random_field = [&] {
    RealField f(g);
    for (int j = 0; j < g.size(); ++j) f[j] = normal(rng);
    return f;
  };
  // <a, b> = h sum a conj(b) for a = ar + i ai, b = br + i bi
  auto cinner = [](const RealField& ar, const RealField& ai, const RealField& br,
                   const RealField& bi) {
    return std::complex<double>(inner(ar, br) + inner(ai, bi), inner(ai, br) - inner(ar, bi));
  };
  WaveStructure out{0.0, 0.0};
  for (int s = 0; s < samples; ++s) {
    const RealField f1r = random_field(), f1i = random_field();
    const RealField f2r = random_field(), f2i = random_field();
    const double nrm = inner(f1r, f1r) + inner(f1i, f1i) + inner(f2r, f2r) + inner(f2i, f2i);
    // J f = (f2, -f1 + 2c f2')
    RealField j2r = 2.0 * profile.c * derivative(f2r, 1) - f1r;
    RealField j2i = 2.0 * profile.c * derivative(f2i, 1) - f1i;
    const std::complex<double> jff = cinner(f2r, f2i, f1r, f1i) + cinner(j2r, j2i, f2r, f2i);
    // H f = (L f1, f2)
    const std::complex<double> hff =
        cinner(op.apply(f1r), op.apply(f1i), f1r, f1i) + cinner(f2r, f2i, f2r, f2i);
    out.max_real_J = std::max(out.max_real_J, std::abs(jff.real()) / nrm);
    out.max_imag_H = std::max(out.max_imag_H, std::abs(hff.imag()) / nrm);
  }
  return out;
}

}  // namespace fk
