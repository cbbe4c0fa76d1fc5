#include "biphoton/app/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace biphoton::app {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v == 0.0 ? 0.0 : v);
  return buf;
}

void CsvTable::add_column(std::string name, const std::vector<double>& values) {
  if (rows.empty()) rows.resize(values.size());
  if (values.size() != rows.size()) throw std::logic_error("CSV column length mismatch: " + name);
  columns.push_back(std::move(name));
  for (std::size_t i = 0; i < values.size(); ++i) rows[i].push_back(values[i]);
}

std::string CsvTable::render() const {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_value(row[i]);
    out += "\n";
  }
  return out;
}

namespace {

double parse_cell(std::string_view cell, const std::string& at) {
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) {
    cell.remove_suffix(1);
  }
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    throw CsvError(at + ": not a finite number: '" + std::string(cell) + "'");
  }
  return v;
}

}  // namespace

SpectrumCurve parse_spectrum_csv(std::string_view text, int field, std::string_view source) {
  const std::string where = source.empty() ? std::string("line ") : std::string(source) + ":";
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::size_t> lines;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const std::string at = where + std::to_string(line_no);
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw CsvError(at + ": expected two comma-separated columns");
    auto rest = line.substr(comma + 1);
    if (const auto c2 = rest.find(','); c2 != std::string_view::npos) rest = rest.substr(0, c2);
    const double x = parse_cell(line.substr(0, comma), at);
    const double y = parse_cell(rest, at);
    if (y < 0.0) throw CsvError(at + ": spectrum values must be non-negative");
    if (!xs.empty() && !(x * kFrequencyAxisUnit > xs.back())) {
      throw CsvError(at + ": abscissas must increase");
    }
    xs.push_back(x * kFrequencyAxisUnit);
    ys.push_back(y);
    lines.push_back(line_no);
  }
  if (xs.size() < 3) throw CsvError(where + std::to_string(line_no) + ": need at least 3 data rows");
  // The first spacing sets the step so the error names the first odd row.
  const double step = xs[1] - xs[0];
  for (std::size_t i = 2; i < xs.size(); ++i) {
    if (std::abs(xs[i] - xs[i - 1] - step) > 1e-6 * step) {
      throw CsvError(where + std::to_string(lines[i]) + ": abscissas are not uniformly spaced");
    }
  }
  SpectrumCurve curve;
  curve.grid = GridSpec{xs.front(), xs.back(), xs.size()};
  curve.values = std::move(ys);
  curve.field = field;
  curve.provenance = SpectrumProvenance::kInvertedInput;
  return curve;
}

SpectrumCurve read_spectrum_csv(const std::string& path, int field) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open input spectrum '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spectrum_csv(buf.str(), field, path);
}

}  // namespace biphoton::app
