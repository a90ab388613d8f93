#include "fkink/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fk {

namespace {

void check_text(const std::string& s, const char* what) {
  if (s.find('\n') != std::string::npos || s.find('\r') != std::string::npos)
    throw FormatError(std::string("csv: line break inside ") + what);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

void CsvTable::add_meta(const std::string& key, const std::string& value) {
  check_text(key, "metadata key");
  check_text(value, "metadata value");
  if (key.find(": ") != std::string::npos) throw FormatError("csv: metadata key contains ': '");
  meta.emplace_back(key, value);
}

void CsvTable::add_meta(const std::string& key, double value) {
  add_meta(key, format_number(value));
}

const std::string& CsvTable::meta_value(const std::string& key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return v;
  throw FormatError("csv: missing metadata '" + key + "'");
}

double CsvTable::meta_number(const std::string& key) const {
  return parse_number(meta_value(key));
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  throw FormatError("csv: missing column '" + name + "'");
}

std::vector<double> CsvTable::column_values(const std::string& name) const {
  const int c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s.empty()) throw FormatError("csv: empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  // ERANGE on underflow still returns the nearest subnormal
  if (end != s.c_str() + s.size() || (errno == ERANGE && std::isinf(v)))
    throw FormatError("csv: not a number: '" + s + "'");
  return v;
}

void write_csv(std::ostream& os, const CsvTable& t) {
  if (t.columns.empty()) throw FormatError("csv: no columns");
  for (const auto& [k, v] : t.meta) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    check_text(t.columns[i], "column name");
    if (t.columns[i].find(',') != std::string::npos) throw FormatError("csv: ',' in column name");
    os << (i ? "," : "") << t.columns[i];
  }
  os << '\n';
  for (const auto& r : t.rows) {
    if (r.size() != t.columns.size()) throw FormatError("csv: row width differs from header");
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
    os << '\n';
  }
  if (!os) throw FormatError("csv: write failed");
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    line = strip_cr(line);
    if (!header && line.rfind("#", 0) == 0) {
      std::string body = line.substr(1);
      if (!body.empty() && body.front() == ' ') body.erase(0, 1);
      const auto pos = body.find(": ");
      if (pos == std::string::npos) {
        t.meta.emplace_back(body, "");
      } else {
        t.meta.emplace_back(body.substr(0, pos), body.substr(pos + 2));
      }
      continue;
    }
    if (line.empty()) continue;
    if (!header) {
      t.columns = split(line);
      header = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != t.columns.size())
      throw FormatError("csv: row " + std::to_string(t.rows.size() + 1) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(t.columns.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_number(c));
    t.rows.push_back(std::move(row));
  }
  if (!header) throw FormatError("csv: no header row");
  return t;
}

void save_csv(const std::filesystem::path& path, const CsvTable& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("csv: cannot open " + path.string() + " for writing");
  write_csv(os, table);
}

CsvTable load_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("csv: cannot open " + path.string());
  return read_csv(is);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CsvTable profile_table(const KinkProfile& p) {
  CsvTable t;
  t.add_meta("kind", "kink_profile");
  t.add_meta("alpha", p.alpha);
  t.add_meta("c", p.c);
  t.add_meta("traveling", p.traveling ? "1" : "0");
  t.add_meta("L", p.grid.half_length());
  t.add_meta("N", std::to_string(p.grid.size()));
  t.add_meta("residual_norm", p.residual_norm);
  t.add_meta("iterations", std::to_string(p.iterations));
  t.add_meta("background", p.background);
  t.columns = {"x", "phi", "dphi", "v"};
  for (int j = 0; j < p.grid.size(); ++j)
    t.rows.push_back({p.grid.node(j), p.phi[j], p.dphi[j], p.correction[j]});
  return t;
}

KinkProfile profile_from_table(const CsvTable& t) {
  if (t.meta_value("kind") != "kink_profile") throw FormatError("csv: not a kink profile");
  const double L = t.meta_number("L");
  const int N = std::stoi(t.meta_value("N"));
  const Grid grid(L, N);
  if (static_cast<int>(t.rows.size()) != N) throw FormatError("csv: profile row count != N");
  const auto x = t.column_values("x");
  for (int j = 0; j < N; ++j)
    if (x[j] != grid.node(j)) throw FormatError("csv: profile nodes do not match the grid");
  KinkProfile p{grid,
                t.meta_number("alpha"),
                t.meta_number("c"),
                t.meta_value("traveling") == "1",
                RealField(grid, t.column_values("v")),
                RealField(grid, t.column_values("phi")),
                RealField(grid, t.column_values("dphi")),
                t.meta_number("residual_norm"),
                std::stoi(t.meta_value("iterations")),
                t.meta_value("background")};
  return p;
}

CsvTable loglog_table(const KinkProfile& p, double x_min, double x_max) {
  if (!(x_min > 0.0 && x_min < x_max)) throw std::invalid_argument("loglog_table: need 0 < x_min < x_max");
  const TailLaw law = tail_law(p.alpha);
  CsvTable t;
  t.add_meta("kind", "kink_loglog");
  t.add_meta("alpha", p.alpha);
  t.add_meta("L", p.grid.half_length());
  t.add_meta("N", std::to_string(p.grid.size()));
  t.add_meta("profile_prefactor", law.profile_prefactor);
  t.columns = {"x", "log_x", "defect", "log_defect", "log_asymptote"};
  for (int j = 0; j < p.grid.size(); ++j) {
    const double x = p.grid.node(j);
    if (x < x_min || x > x_max) continue;
    const double d = 1.0 - p.phi[j];
    t.rows.push_back({x, std::log(x), d, std::log(std::abs(d)),
                      std::log(std::abs(law.profile_prefactor)) - p.alpha * std::log(x)});
  }
  return t;
}

CsvTable tail_fit_table(const std::vector<TailFit>& fits) {
  CsvTable t;
  t.add_meta("kind", "tail_fit");
  t.add_meta("quantity_codes", "0 = 1 - phi, 1 = phi'");
  t.columns = {"quantity", "x_lo", "x_hi", "nodes", "image_corrected", "exponent",
               "raw_exponent", "expected_exponent", "pinned_prefactor", "free_prefactor",
               "expected_prefactor", "rel_exponent_err", "rel_pinned_prefactor_err"};
  for (const auto& f : fits)
    t.rows.push_back({f.quantity == TailQuantity::profile_defect ? 0.0 : 1.0, f.x_lo, f.x_hi,
                      static_cast<double>(f.nodes), f.image_corrected ? 1.0 : 0.0,
                      f.fitted_exponent, f.raw_exponent, f.expected_exponent,
                      f.pinned_prefactor, f.fitted_prefactor, f.expected_prefactor,
                      f.rel_exponent_err, f.rel_pinned_prefactor_err});
  return t;
}

CsvTable kernel_csv(const KernelTable& k) {
  CsvTable t;
  t.add_meta("kind", "kernel_table");
  t.add_meta("alpha", k.spec.alpha);
  t.add_meta("mass", k.spec.mass);
  t.add_meta("c", k.spec.c);
  t.add_meta("second_order", k.spec.second_order ? "1" : "0");
  t.add_meta("x_max", k.x_max);
  t.add_meta("crossover_radius", k.crossover_radius);
  t.add_meta("far_field", k.far_field ? "1" : "0");
  t.columns = {"x", "weight", "value", "quadrature", "asymptote", "rel_err"};
  for (std::size_t i = 0; i < k.x.size(); ++i)
    t.rows.push_back({k.x[i], k.weight[i], k.value[i], k.quadrature[i], k.asymptote[i],
                      k.rel_err[i]});
  return t;
}

CsvTable spectrum_table(const SpectrumReport& r) {
  CsvTable t;
  t.add_meta("kind", "spectrum");
  t.add_meta("alpha", r.alpha);
  t.add_meta("L", r.half_length);
  t.add_meta("ground_alignment", r.ground_alignment);
  t.add_meta("uniqueness_verdict", r.uniqueness_verdict ? "1" : "0");
  t.add_meta("parity_codes", "0 even, 1 odd, 2 mixed");
  t.columns = {"index", "eigenvalue", "residual", "parity"};
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
    t.rows.push_back({static_cast<double>(i), r.eigenvalues[i], r.residuals[i],
                      static_cast<double>(static_cast<int>(r.parity[i]))});
  return t;
}

CsvTable trace_table(const EvolutionTrace& tr) {
  CsvTable t;
  t.add_meta("kind", "evolution_trace");
  t.add_meta("alpha", tr.alpha);
  t.add_meta("dt", tr.dt);
  t.add_meta("T", tr.T);
  t.add_meta("descriptor", tr.descriptor);
  t.add_meta("kappa_fit", tr.kappa_fit);
  t.add_meta("kappa_fit_r2", tr.decay_fit.r2);
  t.add_meta("shift_rate", tr.shift_rate);
  t.add_meta("max_energy_increase", tr.max_energy_increase);
  t.columns = {"t", "norm_l2", "norm_h", "energy", "sigma", "orthogonality"};
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    t.rows.push_back({tr.times[i], tr.norm_l2[i], tr.norm_h[i], tr.energies[i], tr.sigma[i],
                      tr.orthogonality[i]});
  return t;
}

CsvTable wave_table(const WaveStabilityReport& r) {
  CsvTable t;
  t.add_meta("kind", "wave_spectrum");
  t.add_meta("max_real", r.max_real);
  t.add_meta("max_real_all", r.max_real_all);
  t.columns = {"re", "im"};
  for (const auto& mu : r.eigenvalues) t.rows.push_back({mu.real(), mu.imag()});
  return t;
}

}  // namespace fk
