#include "fkink/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "fkink/asym.hpp"
#include "fkink/evolve.hpp"
#include "fkink/green.hpp"
#include "fkink/io.hpp"
#include "fkink/kink.hpp"
#include "fkink/spectrum.hpp"

namespace fk {

namespace {

const std::vector<std::string> kSubcommands = {"kink",   "kernel", "spectrum",
                                               "evolve", "travel", "sweep"};

std::string num(double v) { return format_number(v); }

bool near_endpoint(double a) {
  return std::abs(a - 2.0) < kEndpointExclusion || std::abs(a - 4.0) < kEndpointExclusion;
}

/// Solver-side failure: mapped to exit code 1.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Contracts {
  std::vector<std::string> violations;
  void require(bool ok, const std::string& what) {
    if (!ok) violations.push_back(what);
  }
};

KinkOptions kink_options(const RunConfig& cfg) {
  KinkOptions o;
  o.newton_tol = cfg.newton_tol;
  return o;
}

/// Stationary kinks come from the exact alpha = 2 solution by continuation.
KinkProfile solve_profile(const RunConfig& cfg, bool traveling) {
  const Grid grid(cfg.L, cfg.N);
  const auto trav = traveling ? std::optional<bool>(true) : std::nullopt;
  if (cfg.alpha == 2.0)
    return solve_kink(grid, 2.0, cfg.c, std::nullopt, kink_options(cfg), trav);
  auto path = continue_in_alpha(grid, 2.0, cfg.alpha, cfg.continuation_step, cfg.c,
                                kink_options(cfg), trav);
  return path.back();
}

CsvTable stamped(CsvTable t, const RunConfig& cfg) {
  t.add_meta("subcommand", cfg.subcommand);
  t.add_meta("config_hash", cfg.hash());
  t.add_meta("version", kArtifactVersion);
  return t;
}

std::filesystem::path out_file(const RunConfig& cfg, const std::string& name) {
  return std::filesystem::path(cfg.out) / name;
}

void report(std::ostream& out, const std::string& key, const std::string& value) {
  out << key << ": " << value << '\n';
}

void run_kink(const RunConfig& cfg, std::ostream& out, Contracts& k) {
  const bool traveling = cfg.c != 0.0;
  const KinkProfile p = solve_profile(cfg, traveling);
  save_csv(out_file(cfg, "kink_profile.csv"), stamped(profile_table(p), cfg));
  report(out, "residual_norm", num(p.residual_norm));
  k.require(p.residual_norm <= cfg.newton_tol, "Newton residual above newton_tol");

  const double flux = flux_identity(p);
  report(out, "flux_identity", num(flux));
  k.require(std::abs(flux - 4.0 / 3.0) <= 1e-6 * 4.0 / 3.0, "flux identity differs from 4/3");

  if (cfg.alpha == 2.0 && cfg.c == 0.0) {
    const RealField exact = exact_kink_alpha2(p.grid);
    double err = 0.0;
    for (int j = 0; j < p.grid.size(); ++j)
      if (std::abs(p.grid.node(j)) <= cfg.L / 2) err = std::max(err, std::abs(p.phi[j] - exact[j]));
    report(out, "tanh_sup_error", num(err));
    k.require(err <= 1e-8, "alpha = 2 profile differs from tanh(x/sqrt 2)");
  }

  if (near_endpoint(cfg.alpha) || cfg.x_hi > cfg.L / 2 || traveling) {
    report(out, "tail_fit", "skipped (alpha at 2 or 4, traveling, or window beyond L/2)");
    return;
  }
  const bool super = cfg.alpha > 2.0;
  std::vector<TailFit> fits;
  for (auto q : {TailQuantity::profile_defect, TailQuantity::derivative})
    fits.push_back(fit_tail(p, q, cfg.x_lo, cfg.x_hi, super, cfg.image_correction));
  save_csv(out_file(cfg, "kink_tail.csv"), stamped(tail_fit_table(fits), cfg));
  const TailFit& f = fits.front();
  report(out, "tail_exponent", num(f.fitted_exponent));
  report(out, "tail_prefactor", num(f.pinned_prefactor));
  report(out, "tail_prefactor_expected", num(f.expected_prefactor));

  if (cfg.figure1 || cfg.figure3) {
    const std::string name = cfg.figure1 ? "figure1.csv" : "figure3.csv";
    save_csv(out_file(cfg, name), stamped(loglog_table(p, 1.0, cfg.L / 2), cfg));
    const double exp_tol = cfg.figure1 ? 0.03 : 0.05;
    const double pre_tol = cfg.figure1 ? 0.05 : 0.08;
    k.require(std::abs(f.fitted_exponent + cfg.alpha) <= exp_tol, "tail exponent off the law");
    k.require(f.rel_pinned_prefactor_err <= pre_tol, "tail prefactor off the law");
    if (cfg.figure3) {
      double peak = -INFINITY;
      for (int j = p.grid.center(); j < p.grid.size(); ++j) peak = std::max(peak, p.phi[j]);
      report(out, "overshoot", num(peak - 1.0));
      k.require(peak > 1.0, "no overshoot above 1");
    }
  }
}

void run_kernel(const RunConfig& cfg, std::ostream& out, Contracts& k) {
  KernelSpec spec{cfg.alpha, cfg.mass, cfg.c, cfg.c != 0.0};
  KernelTableOptions opts;
  opts.crossover_radius = cfg.crossover;
  opts.far_field = cfg.far_field;
  const KernelTable t = kernel_table(spec, cfg.x_max, opts);
  save_csv(out_file(cfg, "kernel.csv"), stamped(kernel_csv(t), cfg));
  report(out, "K0", num(t.value.front()));

  const double m0 = kernel_moment0(t);
  report(out, "moment0", num(m0));
  k.require(std::abs(m0 - 1.0 / cfg.mass) <= 1e-6, "moment0 differs from 1/m");

  const bool exact = (cfg.alpha == 2.0 || cfg.alpha == 4.0) && cfg.mass == 2.0 && cfg.c == 0.0;
  if (exact) {
    double err = 0.0;
    for (std::size_t i = 0; i < t.x.size() && t.x[i] <= 10.0; ++i)
      err = std::max(err, std::abs(t.value[i] - exact_kernel(static_cast<int>(cfg.alpha), t.x[i])));
    report(out, "exact_sup_error", num(err));
    k.require(err <= 1e-6, "kernel differs from the closed form");
  }
  if (cfg.alpha > 2.0) {
    const SignReport s = kernel_sign_scan(t);
    report(out, "sign_changes", std::to_string(s.crossings.size()));
    if (!s.crossings.empty()) report(out, "first_zero", num(s.crossings.front()));
  } else if (cfg.alpha < 2.0) {
    const double lo = *std::min_element(t.value.begin(), t.value.end());
    report(out, "min_value", num(lo));
    k.require(lo > 0.0, "sub-Laplacian kernel not positive");
  }
}

void run_spectrum(const RunConfig& cfg, std::ostream& out, Contracts& k) {
  const KinkProfile p = solve_profile(cfg, false);
  const LinearizedOperator op = assemble(p);
  SpectrumOptions so;
  so.seed = cfg.seed;
  const SpectrumReport r = low_spectrum(op, cfg.k, so);
  save_csv(out_file(cfg, "spectrum.csv"), stamped(spectrum_table(r), cfg));
  const UniquenessVerdict u = uniqueness_check(r);
  report(out, "lambda0", num(r.eigenvalues[0]));
  report(out, "lambda1", num(u.lambda1));
  report(out, "ground_alignment", num(r.ground_alignment));
  report(out, "spectral_gap", num(spectral_gap(r)));
  report(out, "uniqueness", u.lambda1_above_one ? "true" : "false");
  k.require(std::abs(r.eigenvalues[0]) <= 1e-4, "lambda0 is not a translation zero mode");
  k.require(r.ground_alignment >= 1.0 - 1e-6, "lambda0 eigenvector not aligned with phi'");
  k.require(u.lambda1_above_one, "lambda1 <= 1");
  if (cfg.dense) {
    const auto d = dense_spectrum(op);
    double err = 0.0;
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
      err = std::max(err, std::abs(d[i] - r.eigenvalues[i]));
    report(out, "dense_max_difference", num(err));
    k.require(err <= 1e-6, "Lanczos and dense eigenvalues disagree");
  }
}

void run_evolve(const RunConfig& cfg, std::ostream& out, Contracts& k) {
  const KinkProfile p = solve_profile(cfg, false);
  const PerturbationKind kind = parse_perturbation(cfg.perturb);
  const RealField w0 = p.correction + perturbation(p.grid, kind, cfg.amplitude, cfg.seed);
  RunOptions ro;
  ro.sample_interval = cfg.sample_interval;
  ro.frame = cfg.frame == "shifted" ? Frame::shifted : Frame::unshifted;
  ro.scheme = cfg.scheme == "linear" ? Scheme::linearly_implicit : Scheme::imex;
  std::ostringstream desc;
  desc << cfg.perturb << " amplitude " << num(cfg.amplitude) << " seed " << cfg.seed;
  EvolutionTrace tr;
  try {
    tr = run(w0, p, cfg.T, cfg.dt, ro, desc.str());
  } catch (const DecompositionError& e) {
    throw SolverFailure(std::string(e.what()) + " at t = " + num(e.time));
  }
  save_csv(out_file(cfg, "trace.csv"), stamped(trace_table(tr), cfg));
  const SpectrumReport r = low_spectrum(assemble(p), 3);
  const double gap = r.odd_eigenvalues.at(0);
  report(out, "kappa_fit", num(tr.kappa_fit));
  report(out, "kappa_fit_r2", num(tr.decay_fit.r2));
  report(out, "odd_gap", num(gap));
  report(out, "shift_rate", num(tr.shift_rate));
  report(out, "sigma_final", num(tr.sigma.back()));
  report(out, "max_energy_increase", num(tr.max_energy_increase));
  k.require(tr.max_energy_increase <= kEnergyTolerance, "energy increased during a step");
  if (kind == PerturbationKind::odd) {
    double s = 0.0;
    for (double v : tr.sigma) s = std::max(s, std::abs(v));
    k.require(s <= 1e-8, "odd perturbation produced a shift");
    k.require(tr.decay_fit.r2 >= 0.99, "decay is not exponential");
    k.require(std::abs(tr.kappa_fit - gap) <= 0.1 * gap, "decay rate differs from the odd gap");
  }
}

void run_travel(const RunConfig& cfg, std::ostream& out, Contracts& k) {
  const KinkProfile p = solve_profile(cfg, true);
  const WaveStabilityReport w = wave_stability(p);
  save_csv(out_file(cfg, "travel.csv"), stamped(wave_table(w), cfg));
  report(out, "residual_norm", num(p.residual_norm));
  report(out, "max_real", num(w.max_real));
  report(out, "max_real_all", num(w.max_real_all));
  k.require(w.max_real <= 1e-6, "block operator has an unstable eigenvalue");
  if (cfg.c == 0.0) {
    const double mismatch = wave_static_mismatch(p, w);
    report(out, "static_mismatch", num(mismatch));
    k.require(mismatch <= 1e-6, "block spectrum differs from +-i sqrt(spec L)");
  }
}

void run_sweep(const RunConfig& cfg, std::ostream& out, Contracts& k, bool& solver_failed) {
  CsvTable t;
  t.add_meta("kind", "spectrum_sweep");
  t.add_meta("L", cfg.L);
  t.add_meta("N", std::to_string(cfg.N));
  t.add_meta("status_codes", "1 solved, 0 solver failure");
  t.columns = {"alpha", "status", "lambda0", "lambda1", "ground_alignment", "spectral_gap",
               "uniqueness"};
  const int n = static_cast<int>(std::floor((cfg.alpha_to - cfg.alpha_from) / cfg.alpha_step + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) {
    RunConfig one = cfg;
    one.alpha = std::round((cfg.alpha_from + i * cfg.alpha_step) * 1e12) / 1e12;
    try {
      const KinkProfile p = solve_profile(one, false);
      SpectrumOptions so;
      so.seed = cfg.seed;
      const SpectrumReport r = low_spectrum(assemble(p), cfg.k, so);
      const UniquenessVerdict u = uniqueness_check(r);
      t.rows.push_back({one.alpha, 1.0, r.eigenvalues[0], u.lambda1, r.ground_alignment,
                        spectral_gap(r), u.lambda1_above_one ? 1.0 : 0.0});
      out << "alpha " << num(one.alpha) << ": lambda0 " << num(r.eigenvalues[0]) << " lambda1 "
          << num(u.lambda1) << " uniqueness " << (u.lambda1_above_one ? "true" : "false") << '\n';
      k.require(u.lambda1_above_one, "lambda1 <= 1 at alpha = " + num(one.alpha));
    } catch (const std::runtime_error& e) {
      solver_failed = true;
      const double nan = std::nan("");
      t.rows.push_back({one.alpha, 0.0, nan, nan, nan, nan, nan});
      out << "alpha " << num(one.alpha) << ": failed (" << e.what() << ")\n";
    }
  }
  save_csv(out_file(cfg, "sweep.csv"), stamped(t, cfg));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

}  // namespace

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv{
      {"subcommand", subcommand},
      {"alpha", num(alpha)},
      {"c", num(c)},
      {"L", num(L)},
      {"N", std::to_string(N)},
      {"seed", std::to_string(seed)},
      {"figure1", figure1 ? "1" : "0"},
      {"figure3", figure3 ? "1" : "0"},
      {"newton_tol", num(newton_tol)},
      {"continuation_step", num(continuation_step)},
      {"x_lo", num(x_lo)},
      {"x_hi", num(x_hi)},
      {"image_correction", image_correction ? "1" : "0"},
      {"mass", num(mass)},
      {"x_max", num(x_max)},
      {"crossover", num(crossover)},
      {"far_field", far_field ? "1" : "0"},
      {"k", std::to_string(k)},
      {"dense", dense ? "1" : "0"},
      {"alpha_from", num(alpha_from)},
      {"alpha_to", num(alpha_to)},
      {"alpha_step", num(alpha_step)},
      {"perturb", perturb},
      {"amplitude", num(amplitude)},
      {"T", num(T)},
      {"dt", num(dt)},
      {"sample_interval", num(sample_interval)},
      {"frame", frame},
      {"scheme", scheme}};
  std::string s;
  for (const auto& [key, v] : kv) s += key + "=" + v + "\n";
  return s;
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical()); }

void validate(const RunConfig& cfg) {
  const auto& s = cfg.subcommand;
  require(std::find(kSubcommands.begin(), kSubcommands.end(), s) != kSubcommands.end(),
          "unknown subcommand '" + s + "'");
  require(std::isfinite(cfg.c) && std::abs(cfg.c) < 1.0, "--c must satisfy |c| < 1");
  require(std::isfinite(cfg.L) && cfg.L > 0.0, "--L must be positive");
  require(cfg.N >= 16 && cfg.N % 2 == 0, "--N must be even and >= 16");
  require(!(cfg.figure1 && cfg.figure3), "--figure1 and --figure3 are exclusive");
  require(cfg.newton_tol > 0.0, "--newton-tol must be positive");
  require(cfg.continuation_step > 0.0 && cfg.continuation_step <= 0.1,
          "--continuation-step must lie in (0, 0.1]");

  if (s == "kernel") {
    require(cfg.alpha > 1.0 && cfg.alpha <= 4.0, "--alpha must lie in (1, 4] for kernel");
    require(cfg.alpha == 2.0 || cfg.alpha == 4.0 || !near_endpoint(cfg.alpha),
            "--alpha lies within 1e-6 of 2 or 4");
    require(cfg.mass > 0.0, "--mass must be positive");
    require(cfg.x_max > 1.0, "--x-max must exceed 1");
    require(cfg.crossover > 1.0, "--crossover must exceed 1");
  } else if (s == "sweep") {
    require(cfg.alpha_step > 0.0, "--step must be positive");
    require(cfg.alpha_from <= cfg.alpha_to, "malformed alpha grid: --from exceeds --to");
    require(cfg.alpha_from > 1.0 && cfg.alpha_to < 4.0, "sweep grid must lie inside (1, 4)");
    require(cfg.k >= 2 && cfg.k <= 10, "--k must lie in [2, 10]");
  } else {
    require(cfg.alpha > 1.0 && cfg.alpha < 4.0, "--alpha must lie in (1, 4)");
    require(cfg.alpha == 2.0 || !near_endpoint(cfg.alpha), "--alpha lies within 1e-6 of 2 or 4");
  }
  if (s == "kink") {
    require(cfg.x_lo >= 10.0 && cfg.x_lo < cfg.x_hi, "tail window needs 10 <= x_lo < x_hi");
  }
  if (s == "spectrum") {
    require(cfg.k >= 2 && cfg.k <= 10, "--k must lie in [2, 10]");
    require(cfg.c == 0.0, "spectrum needs a stationary kink (c = 0)");
    require(!cfg.dense || cfg.N <= kDenseLimit, "--dense needs N <= 2048");
  }
  if (s == "evolve") {
    require(cfg.c == 0.0, "evolve needs a stationary kink (c = 0)");
    require(cfg.dt > 0.0 && cfg.dt <= 0.4, "--dt must lie in (0, 0.4]");
    require(cfg.T > 0.0, "--T must be positive");
    require(cfg.sample_interval >= cfg.dt, "--sample must be at least dt");
    require(cfg.amplitude >= 0.0, "--amplitude must be nonnegative");
    parse_perturbation(cfg.perturb);
  }
  if (s == "travel") {
    require(cfg.alpha <= 2.0, "travel needs alpha in (1, 2]");
    require(cfg.N <= kDenseLimit, "travel needs N <= 2048");
  }
}

RunConfig parse_arguments(const std::vector<std::string>& args, std::ostream& out) {
  RunConfig cfg;
  CLI::App app{"Fractional phi^4 kinks: profiles, kernels, spectra and dynamics", "fkink"};
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "key=value file; [subcommand] sections for specific options");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  auto* o_alpha = app.add_option("--alpha", cfg.alpha, "Fractional order")->capture_default_str();
  app.add_option("--c", cfg.c, "Wave speed")->capture_default_str();
  auto* o_L = app.add_option("--L", cfg.L, "Half length of the periodic box")->capture_default_str();
  auto* o_N = app.add_option("--N", cfg.N, "Grid points")->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--newton-tol", cfg.newton_tol, "Newton residual tolerance")->capture_default_str();
  app.add_option("--continuation-step", cfg.continuation_step, "Step in alpha from 2")
      ->capture_default_str();

  auto* kink = app.add_subcommand("kink", "Solve for the kink and fit its tail");
  kink->add_flag("--figure1", cfg.figure1, "Sub-Laplacian tail preset (alpha 1.5, L 200, N 16384)");
  kink->add_flag("--figure3", cfg.figure3, "Super-Laplacian tail preset (alpha 2.5, L 200, N 16384)");
  kink->add_option("--x-lo", cfg.x_lo, "Tail window start")->capture_default_str();
  kink->add_option("--x-hi", cfg.x_hi, "Tail window end")->capture_default_str();
  kink->add_flag("--image-correction,!--no-image-correction", cfg.image_correction,
                 "Remove the tails of periodic copies before fitting");

  auto* kernel = app.add_subcommand("kernel", "Tabulate the resolvent kernel");
  kernel->add_option("--mass", cfg.mass, "Mass m")->capture_default_str();
  kernel->add_option("--x-max", cfg.x_max, "Table end")->capture_default_str();
  kernel->add_option("--crossover", cfg.crossover, "Asymptote handoff radius")->capture_default_str();
  kernel->add_flag("--far-field", cfg.far_field, "Use the asymptote beyond the crossover");

  auto* spectrum = app.add_subcommand("spectrum", "Low spectrum of the linearization");
  spectrum->add_option("--k", cfg.k, "Eigenvalues per parity sector")->capture_default_str();
  spectrum->add_flag("--dense", cfg.dense, "Cross-check with the dense eigensolver");

  auto* evolve = app.add_subcommand("evolve", "Parabolic flow from a perturbed kink");
  evolve->add_option("--perturb", cfg.perturb, "odd, even or random")
      ->check(CLI::IsMember({"odd", "even", "random"}))
      ->capture_default_str();
  evolve->add_option("--amplitude", cfg.amplitude, "Perturbation amplitude")->capture_default_str();
  evolve->add_option("--T", cfg.T, "Final time")->capture_default_str();
  evolve->add_option("--dt", cfg.dt, "Time step")->capture_default_str();
  evolve->add_option("--sample", cfg.sample_interval, "Sampling interval")->capture_default_str();
  evolve->add_option("--frame", cfg.frame, "Orthogonality frame")
      ->check(CLI::IsMember({"unshifted", "shifted"}))
      ->capture_default_str();
  evolve->add_option("--scheme", cfg.scheme, "Time stepper")
      ->check(CLI::IsMember({"imex", "linear"}))
      ->capture_default_str();

  app.add_subcommand("travel", "Block spectrum of the wave model around a traveling kink");

  auto* sweep = app.add_subcommand("sweep", "lambda0 and lambda1 over an alpha grid");
  sweep->add_option("--from", cfg.alpha_from, "First alpha")->capture_default_str();
  sweep->add_option("--to", cfg.alpha_to, "Last alpha")->capture_default_str();
  sweep->add_option("--step", cfg.alpha_step, "Alpha spacing")->capture_default_str();
  sweep->add_option("--k", cfg.k, "Eigenvalues per parity sector")->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return RunConfig{};
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return RunConfig{};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (auto* opt = app.get_option_no_throw("--config"); opt && opt->count() > 0)
    cfg.config = opt->as<std::string>();

  if (cfg.figure1 || cfg.figure3) {
    if (o_alpha->empty()) cfg.alpha = cfg.figure1 ? 1.5 : 2.5;
    if (o_L->empty()) cfg.L = 200.0;
    if (o_N->empty()) cfg.N = 16384;
  }
  return cfg;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Contracts k;
  bool solver_failed = false;
  try {
    std::filesystem::create_directories(cfg.out);
    report(out, "subcommand", cfg.subcommand);
    report(out, "config_hash", cfg.hash());
    if (cfg.subcommand == "kink") run_kink(cfg, out, k);
    else if (cfg.subcommand == "kernel") run_kernel(cfg, out, k);
    else if (cfg.subcommand == "spectrum") run_spectrum(cfg, out, k);
    else if (cfg.subcommand == "evolve") run_evolve(cfg, out, k);
    else if (cfg.subcommand == "travel") run_travel(cfg, out, k);
    else if (cfg.subcommand == "sweep") run_sweep(cfg, out, k, solver_failed);
    else throw UsageError("unknown subcommand '" + cfg.subcommand + "'");
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  }
  for (const auto& v : k.violations) err << "contract violation: " << v << '\n';
  report(out, "status", !k.violations.empty() ? "contract violation"
                        : solver_failed       ? "solver failure"
                                              : "ok");
  if (solver_failed) return kExitSolverFailure;
  return k.violations.empty() ? kExitOk : kExitContractViolation;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_arguments(args, out);
    if (cfg.subcommand.empty()) return kExitOk;
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return execute(cfg, out, err);
}

}  // namespace fk
