#pragma once

// Run configuration for the biphoton tool: a flat "section.key = value"
// text format, built-in figure presets and strict validation.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "biphoton/model.hpp"
#include "biphoton/numerics.hpp"
#include "biphoton/pump.hpp"

namespace biphoton::app {

/// Invalid configuration text or values; the message names the key path
/// and, when known, the source line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PumpSettings {
  double xi1 = 1.0;
  double tau1 = 1e-13;
  double a1 = 0.0;
  double xi2 = 0.0;
  double tau2 = 1e-13;
  double a2 = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

struct CrystalSettings {
  double L = 1.5;
  double inv_vp = 56.85e-13;
  double inv_v1 = 56.14e-13;
  double inv_v2 = 54.30e-13;
  double omega0_1 = 0.0;
  double omega0_2 = 0.0;
};

struct DelaySettings {
  double inv_g1 = 51.25e-13;
  double inv_g2 = 51.59e-13;
};

struct MeanPhotonSettings {
  int field = 1;
  double tau_min = -3e-13;
  double tau_max = 3e-13;
  std::size_t n = 601;
};

struct SpectrumSettings {
  int field = 1;
  double nu_min = -6e13;
  double nu_max = 6e13;
  std::size_t n = 601;
  std::vector<double> thetas = {0.0};
};

struct HomSettings {
  std::optional<double> tau_l_min;  ///< unset: -0.1 D L
  std::optional<double> tau_l_max;  ///< unset: 1.1 D L
  std::size_t n = 241;
  std::vector<double> phis = {0.0};
};

struct ScanSettings {
  std::string kind = "vis-vs-theta";
  double theta_min = 0.0;
  double theta_max = 2e-12;
  std::size_t theta_n = 201;
  double phi_min = 0.0;
  double phi_max = 2.0 * kPi;
  std::size_t phi_n = 73;
  std::vector<double> tau0_list = {0.5e-13, 1.0e-13, 1.5e-13, 2.0e-13};
  double chirp = 0.0;
  std::size_t tau_l_points = 241;
};

struct InvertSettings {
  int field = 1;
  std::string input;  ///< empty: synthesize the spectrum from the pump
  double lambda = 1e-6;
  std::vector<double> lambdas;  ///< optional residual-vs-lambda sweep
  double nu_min = -15e13;
  double nu_max = 15e13;
  std::size_t n = 601;
};

struct RunConfig {
  std::string preset;  ///< name of the preset applied first, if any
  PumpSettings pump;
  CrystalSettings crystal;
  DelaySettings delay;
  NormalizationConstants consts;
  QuadSpec quad;
  MeanPhotonSettings mean_photons;
  SpectrumSettings spectrum;
  HomSettings hom;
  ScanSettings scan;
  InvertSettings invert;
  std::string output_path;

  PumpField pump_field() const;
  CrystalParams crystal_params() const;
  DelayLine delay_line() const;
};

/// Parses a number; also accepts "pi", "-pi", "0.5pi" and "0.5*pi".
double parse_number(std::string_view text);

/// Applies every "section.key = value" line of `text` on top of `config`.
/// '#' starts a comment. Unknown keys, duplicate keys and malformed values
/// throw ConfigError naming the key path and line.
void apply_config_text(RunConfig& config, std::string_view text, std::string_view source = "");
void apply_config_file(RunConfig& config, const std::string& path);

/// Sets a single key, as if read from a config line.
void set_value(RunConfig& config, std::string_view key, std::string_view value);

std::vector<std::string> preset_names();
/// Overwrites `config` with a figure preset. Throws ConfigError for an
/// unknown name.
void apply_preset(RunConfig& config, std::string_view name);
/// Command a preset is meant for ("hom", "scan", ...).
std::string preset_command(std::string_view name);

/// Checks every invariant of the configuration; throws ConfigError.
void validate(const RunConfig& config);

/// All keys with canonical values (%.17g), sorted by key.
std::vector<std::pair<std::string, std::string>> canonical_entries(const RunConfig& config);

/// FNV-1a 64-bit hash of the canonical "key=value\n" listing.
std::uint64_t config_hash(const RunConfig& config);
std::string config_hash_hex(const RunConfig& config);

}  // namespace biphoton::app
