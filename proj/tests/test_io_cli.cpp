#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "fkink/cli.hpp"
#include "fkink/io.hpp"

using namespace fk;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

int cli(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.0, -0.0, 1.0, M_PI, -1e-300, 6.02214076e23, std::numeric_limits<double>::denorm_min(),
                   std::numeric_limits<double>::max(), 0.1 + 0.2}) {
    const double back = parse_number(format_number(v));
    CHECK(back == v);
    CHECK(std::signbit(back) == std::signbit(v));
  }
  CHECK(format_number(1.0) == "1.0000000000000000e+00");
  CHECK(std::isnan(parse_number(format_number(std::nan("")))));
  CHECK(parse_number(format_number(-INFINITY)) == -INFINITY);
  CHECK_THROWS_AS(parse_number("1.5x"), FormatError);
  CHECK_THROWS_AS(parse_number(""), FormatError);
}

TEST_CASE("csv tables round-trip") {
  CsvTable t;
  t.add_meta("kind", "test");
  t.add_meta("alpha", 1.5);
  t.columns = {"a", "b"};
  t.rows = {{1.0, 2.5e-17}, {-3.0, std::nan("")}};
  std::stringstream ss;
  write_csv(ss, t);
  CHECK(ss.str().rfind("# kind: test\n# alpha: 1.5000000000000000e+00\na,b\n", 0) == 0);
  const CsvTable r = read_csv(ss);
  CHECK(r.meta == t.meta);
  CHECK(r.columns == t.columns);
  CHECK(r.rows[0] == t.rows[0]);
  CHECK(std::isnan(r.rows[1][1]));
  CHECK(r.meta_number("alpha") == 1.5);
  CHECK(r.column("b") == 1);
  CHECK_THROWS_AS(r.column("c"), FormatError);
  CHECK_THROWS_AS(r.meta_value("missing"), FormatError);
  CHECK_THROWS_AS(t.add_meta("bad", "two\nlines"), FormatError);
  std::stringstream broken("a,b\n1,2,3\n");
  CHECK_THROWS_AS(read_csv(broken), FormatError);
  std::stringstream empty("# only: metadata\n");
  CHECK_THROWS_AS(read_csv(empty), FormatError);
}

TEST_CASE("profile csv round-trip is exact") {
  const KinkProfile p = continue_in_alpha(Grid(30.0, 256), 2.0, 1.7, 0.1).back();
  TempDir dir("fkink_io_profile");
  save_csv(dir.path / "p.csv", profile_table(p));
  const KinkProfile q = profile_from_table(load_csv(dir.path / "p.csv"));
  CHECK(q.grid == p.grid);
  CHECK(q.alpha == p.alpha);
  CHECK(q.residual_norm == p.residual_norm);
  CHECK(q.iterations == p.iterations);
  CHECK(q.background == p.background);
  for (int j = 0; j < p.grid.size(); ++j) {
    CHECK(q.phi[j] == p.phi[j]);
    CHECK(q.dphi[j] == p.dphi[j]);
    CHECK(q.correction[j] == p.correction[j]);
  }
  CsvTable wrong = profile_table(p);
  wrong.rows.pop_back();
  CHECK_THROWS_AS(profile_from_table(wrong), FormatError);
}

TEST_CASE("fnv hash") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("config parsing and precedence") {
  std::ostringstream sink;
  RunConfig d = parse_arguments({"kink"}, sink);
  CHECK(d.subcommand == "kink");
  CHECK(d.alpha == 1.5);
  CHECK(d.N == 1024);

  TempDir dir("fkink_cli_config");
  const fs::path ini = dir.path / "run.ini";
  std::ofstream(ini) << "alpha=1.7\nL=80\n[kink]\nx-lo=15\n";
  RunConfig c = parse_arguments({"kink", "--config", ini.string(), "--alpha", "1.9"}, sink);
  CHECK(c.alpha == 1.9);
  CHECK(c.L == 80.0);
  CHECK(c.x_lo == 15.0);
  CHECK(c.config == ini.string());

  RunConfig f = parse_arguments({"kink", "--figure1"}, sink);
  CHECK(f.alpha == 1.5);
  CHECK(f.L == 200.0);
  CHECK(f.N == 16384);
  RunConfig f3 = parse_arguments({"kink", "--figure3", "--N", "4096"}, sink);
  CHECK(f3.alpha == 2.5);
  CHECK(f3.N == 4096);

  CHECK_THROWS_AS(parse_arguments({}, sink), UsageError);
  CHECK_THROWS_AS(parse_arguments({"dance"}, sink), UsageError);
  CHECK_THROWS_AS(parse_arguments({"kink", "--alpha", "abc"}, sink), UsageError);
  std::ofstream(ini) << "nonsense=1\n";
  CHECK_THROWS_AS(parse_arguments({"kink", "--config", ini.string()}, sink), UsageError);
}

TEST_CASE("config hash covers the numerics") {
  RunConfig a;
  a.subcommand = "kink";
  RunConfig b = a;
  b.out = "elsewhere";
  CHECK(a.hash() == b.hash());
  b.alpha = 1.6;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("validation") {
  RunConfig c;
  c.subcommand = "kink";
  CHECK_NOTHROW(validate(c));
  c.alpha = 1.0;
  CHECK_THROWS_AS(validate(c), UsageError);
  c = RunConfig{};
  c.subcommand = "sweep";
  c.alpha_from = 2.0;
  c.alpha_to = 1.5;
  CHECK_THROWS_AS(validate(c), UsageError);
  c = RunConfig{};
  c.subcommand = "travel";
  c.alpha = 2.5;
  CHECK_THROWS_AS(validate(c), UsageError);
  c = RunConfig{};
  c.subcommand = "evolve";
  c.dt = 1.0;
  CHECK_THROWS_AS(validate(c), UsageError);
  c = RunConfig{};
  c.subcommand = "kernel";
  c.alpha = 4.0;
  CHECK_NOTHROW(validate(c));
  c.N = 15;
  CHECK_THROWS_AS(validate(c), UsageError);
}

TEST_CASE("exit codes") {
  TempDir dir("fkink_cli_exit");
  const std::string out = dir.path.string();
  std::string text, err;
  CHECK(cli({"kink", "--alpha", "2", "--out", out}, &text) == kExitOk);
  CHECK(text.find("tanh_sup_error") != std::string::npos);
  CHECK(fs::exists(dir.path / "kink_profile.csv"));
  CHECK(cli({"kink", "--alpha", "1.0", "--out", out}, nullptr, &err) == kExitUsage);
  CHECK(err.find("usage error") != std::string::npos);
  CHECK(cli({"sweep", "--from", "2", "--to", "1.5", "--out", out}) == kExitUsage);
  CHECK(cli({"kernel", "--alpha", "2", "--x-max", "20", "--out", out}) == kExitOk);
  // x_max too short for the moment tail correction
  CHECK(cli({"kernel", "--alpha", "1.5", "--x-max", "50", "--out", out}) == kExitUsage);
  // an unreachable tolerance is a solver failure
  CHECK(cli({"kink", "--alpha", "1.5", "--newton-tol", "1e-30", "--out", out}) == kExitSolverFailure);
  CHECK(cli({"--help"}, &text) == kExitOk);
  CHECK(text.find("Subcommands") != std::string::npos);
}

TEST_CASE("subcommands write deterministic csv") {
  TempDir a("fkink_cli_det_a"), b("fkink_cli_det_b");
  for (const auto* d : {&a, &b}) {
    CHECK(cli({"evolve", "--alpha", "1.5", "--N", "512", "--T", "3", "--dt", "0.01", "--perturb", "random",
               "--seed", "3", "--out", d->path.string()}) == kExitOk);
    CHECK(cli({"sweep", "--from", "1.8", "--to", "2.0", "--N", "512", "--out", d->path.string()}) == kExitOk);
  }
  CHECK(slurp(a.path / "trace.csv") == slurp(b.path / "trace.csv"));
  CHECK(slurp(a.path / "sweep.csv") == slurp(b.path / "sweep.csv"));
  const CsvTable s = load_csv(a.path / "sweep.csv");
  CHECK(s.rows.size() == 3);
  for (const auto& row : s.rows) CHECK(row[s.column("uniqueness")] == 1.0);
  CHECK(s.meta_value("version") == kArtifactVersion);
}

TEST_CASE("single-alpha sweep and spectrum") {
  TempDir d("fkink_cli_spec");
  std::string text;
  CHECK(cli({"sweep", "--from", "1.5", "--to", "1.5", "--N", "512", "--out", d.path.string()}, &text) == kExitOk);
  CHECK(load_csv(d.path / "sweep.csv").rows.size() == 1);
  CHECK(cli({"spectrum", "--alpha", "2", "--N", "512", "--dense", "--out", d.path.string()}, &text) == kExitOk);
  const auto pos = text.find("lambda1: ");
  REQUIRE(pos != std::string::npos);
  CHECK(parse_number(text.substr(pos + 9, text.find('\n', pos) - pos - 9)) == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("travel") {
  TempDir d("fkink_cli_travel");
  std::string text;
  CHECK(cli({"travel", "--alpha", "1.5", "--c", "0.5", "--N", "256", "--out", d.path.string()}, &text) == kExitOk);
  const CsvTable t = load_csv(d.path / "travel.csv");
  CHECK(t.rows.size() == 512);
  CHECK(cli({"travel", "--alpha", "2.5", "--out", d.path.string()}) == kExitUsage);
}
