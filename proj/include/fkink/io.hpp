#pragma once

// CSV interchange: '#' metadata lines, one header row, ',' separator and
// 17 significant digits, so every double survives a write/read cycle.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fkink/evolve.hpp"
#include "fkink/green.hpp"
#include "fkink/kink.hpp"
#include "fkink/spectrum.hpp"

namespace fk {

inline constexpr const char* kArtifactVersion = "fkink 1.0.0";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  /// Ordered key/value pairs written as "# key: value".
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(const std::string& key, const std::string& value);
  void add_meta(const std::string& key, double value);
  /// Value of the first entry named key; throws FormatError if absent.
  const std::string& meta_value(const std::string& key) const;
  double meta_number(const std::string& key) const;
  /// Index of a column; throws FormatError if absent.
  int column(const std::string& name) const;
  std::vector<double> column_values(const std::string& name) const;
};

/// %.16e, with nan / inf / -inf spelled out.
std::string format_number(double v);
double parse_number(const std::string& s);

void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(std::istream& is);
void save_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable load_csv(const std::filesystem::path& path);

/// 64-bit FNV-1a of text, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Columns x, phi, dphi, v (= phi - W).
CsvTable profile_table(const KinkProfile& p);
/// Inverse of profile_table; the residual is taken from metadata.
KinkProfile profile_from_table(const CsvTable& table);

/// Columns x, log_x, defect, log_defect, log_asymptote (1 - phi for x > 0).
CsvTable loglog_table(const KinkProfile& p, double x_min, double x_max);

CsvTable tail_fit_table(const std::vector<TailFit>& fits);

/// Columns x, weight, value, quadrature, asymptote, rel_err.
CsvTable kernel_csv(const KernelTable& table);

/// Columns index, eigenvalue, residual, parity (0 even, 1 odd, 2 mixed).
CsvTable spectrum_table(const SpectrumReport& report);

/// Columns t, norm_l2, norm_h, energy, sigma, orthogonality.
CsvTable trace_table(const EvolutionTrace& trace);

/// Columns re, im of the block eigenvalues, ordered by modulus.
CsvTable wave_table(const WaveStabilityReport& report);

}  // namespace fk
