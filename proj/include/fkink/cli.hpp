#pragma once

// Command-line front end. Subcommands kink, kernel, spectrum, evolve, travel
// and sweep write CSV files into --out and a key: value summary to stdout.
// Precedence: flags > config file (key=value, [subcommand] sections) >
// figure presets > built-in defaults.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace fk {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverFailure = 1;
inline constexpr int kExitContractViolation = 2;
inline constexpr int kExitUsage = 64;

struct RunConfig {
  std::string subcommand;
  // shared
  double alpha = 1.5;
  double c = 0.0;
  double L = 50.0;
  int N = 1024;
  std::string out = ".";
  std::string config;
  std::uint64_t seed = 12345;
  // kink
  bool figure1 = false;
  bool figure3 = false;
  double newton_tol = 1e-9;
  double continuation_step = 0.1;
  double x_lo = 20.0;
  double x_hi = 80.0;
  bool image_correction = true;
  // kernel
  double mass = 2.0;
  double x_max = 200.0;
  double crossover = 25.0;
  bool far_field = false;
  // spectrum, sweep
  int k = 5;
  bool dense = false;
  double alpha_from = 1.1;
  double alpha_to = 2.4;
  double alpha_step = 0.1;
  // evolve
  std::string perturb = "odd";
  double amplitude = 0.05;
  double T = 12.0;
  double dt = 0.005;
  double sample_interval = 0.5;
  std::string frame = "unshifted";
  std::string scheme = "imex";

  /// Sorted key=value lines of every field except out and config.
  std::string canonical() const;
  /// FNV-1a of canonical().
  std::string hash() const;
};

/// Usage error raised by validation before any solver runs.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Checks every numeric field against the owning module's preconditions.
void validate(const RunConfig& cfg);

/// Parses argv-style arguments (without the program name). Returns the
/// resolved config; throws UsageError on malformed input. Help requests
/// print to out and return a config with an empty subcommand.
RunConfig parse_arguments(const std::vector<std::string>& args, std::ostream& out);

/// Runs a validated config and returns the exit code.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_arguments + validate + execute with exit-code mapping.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fk
