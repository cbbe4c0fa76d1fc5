#pragma once

// Fixed-format CSV output and the two-column spectrum reader.

#include <string>
#include <string_view>
#include <vector>

#include "biphoton/app/config.hpp"
#include "biphoton/one_photon.hpp"

namespace biphoton::app {

/// Malformed CSV input; the message names the offending line.
class CsvError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// 9 significant digits in scientific notation ("%.8e").
std::string format_value(double v);

struct CsvTable {
  std::vector<std::string> comments;  ///< written as "# ..." lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_column(std::string name, const std::vector<double>& values);
  std::string render() const;
};

/// Reads "abscissa,value" rows (abscissa in 10^13 rad/s) into a spectrum of
/// field `field`. Lines starting with '#' are skipped, the first remaining
/// line is the column header. The abscissas must form a uniform increasing
/// grid.
SpectrumCurve parse_spectrum_csv(std::string_view text, int field, std::string_view source = "");
SpectrumCurve read_spectrum_csv(const std::string& path, int field);

}  // namespace biphoton::app
