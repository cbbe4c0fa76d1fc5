#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "biphoton/app/commands.hpp"

int main(int argc, char** argv) {
  using namespace biphoton::app;
  CLI::App cli{"Pulsed SPDC one- and two-photon observables"};
  RunRequest request;
  std::string config_path;
  std::string preset;
  std::string out;
  std::string kind;
  std::string input;
  double lambda = 0.0;

  cli.add_option("command", request.command, "mean-photons | spectrum | hom | scan | invert")
      ->required()
      ->check(CLI::IsMember(command_names()));
  auto* config_opt = cli.add_option("--config", config_path, "configuration file (section.key = value)");
  auto* preset_opt =
      cli.add_option("--preset", preset, "built-in figure preset")->check(CLI::IsMember(preset_names()));
  cli.add_flag("--validate", request.validate, "hom: add generic-quadrature columns");
  auto* lambda_opt = cli.add_option("--lambda", lambda, "invert: Tikhonov weight");
  auto* out_opt = cli.add_option("--out", out, "output CSV path (manifest written alongside)");
  auto* kind_opt = cli.add_option("--kind", kind, "scan: r0-vs-theta | vis-vs-theta | vis-vs-phi | thetamax-vs-tau0");
  auto* input_opt = cli.add_option("--input", input, "invert: measured spectrum CSV");
  cli.add_option("--threads", request.threads, "worker threads")->check(CLI::Range(1u, 256u));

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? kExitOk : kExitUsage;
  }
  if (*config_opt) request.config_path = config_path;
  if (*preset_opt) request.preset = preset;
  if (*lambda_opt) request.lambda = lambda;
  if (*out_opt) request.out = out;
  if (*kind_opt) request.kind = kind;
  if (*input_opt) request.input = input;
  return run(request, std::cout, std::cerr);
}
