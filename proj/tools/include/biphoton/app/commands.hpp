#pragma once

// Command dispatch for the biphoton tool. Each command turns a validated
// RunConfig into a CSV table plus a JSON manifest.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "biphoton/app/config.hpp"

namespace biphoton::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitIllPosed = 4,
};

struct RunRequest {
  std::string command;  ///< mean-photons, spectrum, hom, scan or invert
  std::optional<std::string> config_path;
  std::optional<std::string> preset;
  bool validate = false;
  std::optional<double> lambda;
  std::optional<std::string> out;
  std::optional<std::string> kind;   ///< scan kind override
  std::optional<std::string> input;  ///< invert input CSV override
  unsigned threads = 1;
};

struct RunResult {
  std::string csv;
  std::string manifest;  ///< JSON text
  /// Extra outputs as (path suffix, content), e.g. the lambda sweep table.
  std::vector<std::pair<std::string, std::string>> extra_files;
  int exit_code = kExitOk;
  std::string message;  ///< diagnostic for a non-zero exit code
};

std::vector<std::string> command_names();

/// Preset, then config file, then command-line overrides; validated.
RunConfig load_run_config(const RunRequest& request);

/// Runs one command. Library and configuration errors are mapped onto exit
/// codes; an ill-posed inversion still returns its best-effort CSV.
RunResult execute(const RunConfig& config, const RunRequest& request);

/// Loads, executes and writes the outputs: to request.out (or
/// output.path) with a "<path>.manifest.json" sidecar, or to `out` when no
/// path is configured. Returns the process exit code.
int run(const RunRequest& request, std::ostream& out, std::ostream& err);

}  // namespace biphoton::app
