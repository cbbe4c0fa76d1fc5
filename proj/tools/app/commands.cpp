#include "biphoton/app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "biphoton/app/csv.hpp"
#include "biphoton/error.hpp"
#include "biphoton/one_photon.hpp"
#include "biphoton/two_photon.hpp"
#include "json.hpp"

namespace biphoton::app {

namespace {

using nlohmann::json;

std::string sci(double v) { return format_value(v); }

std::vector<double> scaled(const std::vector<double>& v, double unit) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [unit](double x) { return x / unit; });
  return out;
}

// Header shared by every CSV: the command, the full parameter set, the
// config hash and the quadrature settings.
CsvTable make_table(const RunConfig& c, const std::string& command, const std::string& method) {
  CsvTable t;
  t.comments.push_back("biphoton " + command);
  t.comments.push_back("preset: " + (c.preset.empty() ? std::string("none") : c.preset));
  t.comments.push_back("config_hash: fnv1a64:" + config_hash_hex(c));
  t.comments.push_back("method: " + method);
  for (const auto& [key, value] : canonical_entries(c)) t.comments.push_back(key + " = " + value);
  return t;
}

json base_manifest(const RunConfig& c, const RunRequest& r, const std::string& method) {
  json m;
  m["tool"] = "biphoton";
  m["command"] = r.command;
  m["preset"] = c.preset;
  m["config_hash"] = "fnv1a64:" + config_hash_hex(c);
  m["method"] = method;
  m["threads"] = r.threads;
  json params = json::object();
  for (const auto& [key, value] : canonical_entries(c)) params[key] = value;
  m["parameters"] = params;
  m["quadrature"] = {{"rel_tol", c.quad.rel_tol},
                     {"abs_tol", c.quad.abs_tol},
                     {"max_depth", c.quad.max_depth},
                     {"truncation_eps", c.quad.truncation_eps}};
  m["warnings"] = json::array();
  return m;
}

std::string phase_suffix(const std::vector<double>& phis, double phi) {
  return phis.size() > 1 ? "[phi=" + sci(phi) + "]" : "";
}

RunResult cmd_mean_photons(const RunConfig& c, const RunRequest& r) {
  const auto& s = c.mean_photons;
  const GridSpec grid{s.tau_min, s.tau_max, s.n};
  const auto curve = photon_number_curve(c.pump_field(), c.crystal_params(), s.field, grid,
                                         c.consts, c.quad, r.threads);
  CsvTable t = make_table(c, r.command, "adaptive-gauss-kronrod");
  t.comments.push_back("units: tau in 1e-13 s");
  t.add_column("tau", scaled(grid.points(), kTimeAxisUnit));
  t.add_column("N" + std::to_string(s.field), curve.values);
  RunResult out;
  out.csv = t.render();
  out.manifest = base_manifest(c, r, "adaptive-gauss-kronrod").dump(2);
  return out;
}

RunResult cmd_spectrum(const RunConfig& c, const RunRequest& r) {
  const auto& s = c.spectrum;
  const GridSpec grid{s.nu_min, s.nu_max, s.n};
  const PumpField pump = c.pump_field();
  const CrystalParams crystal = c.crystal_params();
  CsvTable t = make_table(c, r.command, "adaptive-gauss-kronrod");
  t.comments.push_back("units: nu in 1e13 rad/s");
  t.add_column("nu", scaled(grid.points(), kFrequencyAxisUnit));
  for (double theta : s.thetas) {
    const auto curve =
        spectrum_curve(pump.with_theta(theta), crystal, s.field, grid, c.consts, c.quad, r.threads);
    t.add_column("S" + std::to_string(s.field) + "[theta=" + sci(theta) + "]", curve.values);
  }
  RunResult out;
  out.csv = t.render();
  out.manifest = base_manifest(c, r, "adaptive-gauss-kronrod").dump(2);
  return out;
}

RunResult cmd_hom(const RunConfig& c, const RunRequest& r) {
  const CrystalParams crystal = c.crystal_params();
  const DelayLine delay = c.delay_line();
  const PumpField pump = c.pump_field();
  const double dl = crystal.dip_width();
  const GridSpec grid{c.hom.tau_l_min.value_or(-0.1 * dl), c.hom.tau_l_max.value_or(1.1 * dl),
                      c.hom.n};
  grid.validate();
  const std::string method = to_string(HomMethod::kGaussianClosedForm);
  CsvTable t = make_table(c, r.command, method);
  t.comments.push_back("units: l in mm, tau_l in 1e-13 s");
  json m = base_manifest(c, r, method);
  const auto taus = grid.points();
  std::vector<double> lengths;
  for (double tau : taus) lengths.push_back(delay.length_for_delay(tau));
  t.add_column("l_mm", lengths);
  t.add_column("tau_l", scaled(taus, kTimeAxisUnit));
  double max_delta = 0.0;
  for (double phi : c.hom.phis) {
    const HomModel model(pump.with_phi(phi), crystal, c.consts, HomMethod::kGaussianClosedForm,
                         c.quad);
    const Interferogram ig = interferogram(model, delay, grid, r.threads);
    const std::string sfx = phase_suffix(c.hom.phis, phi);
    t.add_column("R_n" + sfx, ig.r_n);
    t.add_column("rho1" + sfx, ig.rho1);
    t.add_column("rho2" + sfx, ig.rho2);
    json entry = {{"phi", phi}, {"R0", ig.r0.total()}, {"R01", ig.r0.r01}, {"R02", ig.r0.r02}};
    if (ig.tau_l.front() <= -0.1 * dl * (1 - 1e-9) && ig.tau_l.back() >= 1.1 * dl * (1 - 1e-9)) {
      try {
        const auto v = visibility(ig, [&](double x) { return model.r_n(x); });
        entry["visibility"] = v.v;
        entry["R_min"] = v.r_min;
        entry["R_max"] = v.r_max;
        entry["R_max_convention"] = v.max_from_scan ? "scan-maximum" : "baseline";
        t.comments.push_back("visibility" + sfx + " = " + sci(v.v));
      } catch (const UndefinedVisibilityError&) {
        entry["visibility"] = nullptr;
      }
    }
    if (r.validate) {
      const HomModel generic(pump.with_phi(phi), crystal, c.consts, HomMethod::kGenericQuadrature,
                             c.quad);
      const Interferogram g = interferogram(generic, delay, grid, r.threads);
      t.add_column("R_n_generic" + sfx, g.r_n);
      for (std::size_t i = 0; i < g.r_n.size(); ++i) {
        max_delta = std::max(max_delta, std::abs(g.r_n[i] - ig.r_n[i]));
      }
    }
    m["phases"].push_back(entry);
  }
  if (r.validate) {
    m["validation"] = {{"method", to_string(HomMethod::kGenericQuadrature)},
                       {"max_abs_delta_R_n", max_delta}};
    t.comments.push_back("validation: max |R_n(gaussian) - R_n(generic)| = " + sci(max_delta));
  }
  RunResult out;
  out.csv = t.render();
  out.manifest = m.dump(2);
  return out;
}

RunResult cmd_scan(const RunConfig& c, const RunRequest& r) {
  const std::string kind = c.scan.kind;
  const CrystalParams crystal = c.crystal_params();
  const PumpField pump = c.pump_field();
  const GridSpec thetas{c.scan.theta_min, c.scan.theta_max, c.scan.theta_n};
  ScanOptions options;
  options.tau_l_points = c.scan.tau_l_points;
  options.threads = r.threads;
  options.spec = c.quad;
  const std::string method = to_string(options.method);
  CsvTable t = make_table(c, r.command + " " + kind, method);
  json m = base_manifest(c, r, method);
  m["kind"] = kind;

  if (kind == "r0-vs-theta") {
    const auto points = r0_vs_theta(pump, crystal, thetas, c.consts);
    std::vector<double> th, r0, r01, r02;
    for (const auto& p : points) {
      th.push_back(p.theta);
      r0.push_back(p.r0.total());
      r01.push_back(p.r0.r01);
      r02.push_back(p.r0.r02);
    }
    t.comments.push_back("units: theta in 1e-13 s");
    t.add_column("theta", scaled(th, kTimeAxisUnit));
    t.add_column("R0", r0);
    t.add_column("R01", r01);
    t.add_column("R02", r02);
    m["ratio_first_to_last"] = r0.front() / r0.back();
  } else if (kind == "vis-vs-theta" || kind == "vis-vs-phi") {
    const bool by_theta = kind == "vis-vs-theta";
    const VisibilityScan scan =
        by_theta ? visibility_vs_theta(pump, crystal, thetas, c.consts, options)
                 : visibility_vs_phi(pump, crystal,
                                     GridSpec{c.scan.phi_min, c.scan.phi_max, c.scan.phi_n},
                                     c.consts, options);
    t.comments.push_back(by_theta ? "units: theta in 1e-13 s" : "units: phi in rad");
    t.add_column(by_theta ? "theta" : "phi", by_theta ? scaled(scan.x, kTimeAxisUnit) : scan.x);
    t.add_column("V", scan.v);
    const double shown = by_theta ? scan.arg_max / kTimeAxisUnit : scan.arg_max;
    t.comments.push_back(std::string(by_theta ? "theta_max" : "phi_max") + " = " + sci(shown) +
                         (scan.has_interior_max ? "" : " (boundary)"));
    t.comments.push_back("V_max = " + sci(scan.max_value));
    m["arg_max"] = scan.arg_max;
    m["V_max"] = scan.max_value;
    m["interior_max"] = scan.has_interior_max;
  } else {
    const auto points =
        theta_max_vs_tau0(c.scan.tau0_list, c.scan.chirp, crystal, thetas, c.consts, options);
    std::vector<double> tau0, tmax, vmax;
    for (const auto& p : points) {
      tau0.push_back(p.tau0);
      tmax.push_back(p.theta_max);
      vmax.push_back(p.v_max);
    }
    t.comments.push_back("units: tau0 and theta_max in 1e-13 s");
    t.add_column("tau0", scaled(tau0, kTimeAxisUnit));
    t.add_column("V_max", vmax);
    t.add_column("theta_max", scaled(tmax, kTimeAxisUnit));
  }
  RunResult out;
  out.csv = t.render();
  out.manifest = m.dump(2);
  return out;
}

double relative_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    norm += b[i] * b[i];
  }
  return norm > 0.0 ? std::sqrt(diff / norm) : 0.0;
}

RunResult cmd_invert(const RunConfig& c, const RunRequest& r) {
  const CrystalParams crystal = c.crystal_params();
  const auto& s = c.invert;
  const std::string input = r.input.value_or(s.input);
  const bool synthesized = input.empty();
  const PumpField pump = c.pump_field();
  const SpectrumCurve measured =
      synthesized ? spectrum_curve(pump, crystal, s.field, GridSpec{s.nu_min, s.nu_max, s.n},
                                   c.consts, c.quad, r.threads)
                  : read_spectrum_csv(input, s.field);

  InversionOptions options;
  options.lambda = r.lambda.value_or(s.lambda);
  const std::string method = "tikhonov-fft";
  json m = base_manifest(c, r, method);
  m["input"] = synthesized ? std::string("synthesized from pump") : input;
  m["lambda"] = options.lambda;

  RunResult out;
  InversionResult result;
  try {
    result = invert_pump_spectrum(measured, crystal, c.consts, options);
  } catch (const IllPosedInversionError& e) {
    result = e.best_estimate();
    out.exit_code = kExitIllPosed;
    out.message = e.what();
  }
  m["residual"] = result.residual;
  for (const auto& w : result.warnings) m["warnings"].push_back(w);

  CsvTable t = make_table(c, r.command, method);
  t.comments.push_back("units: nu_p in 1e13 rad/s");
  t.comments.push_back("input: " + (synthesized ? std::string("synthesized from pump") : input));
  t.comments.push_back("lambda = " + sci(options.lambda));
  t.comments.push_back("residual = " + sci(result.residual));
  if (out.exit_code == kExitIllPosed) t.comments.push_back("ill-posed: best-effort estimate");
  const auto nus = result.pump.grid.points();
  t.add_column("nu_p", scaled(nus, kFrequencyAxisUnit));
  t.add_column("P", result.pump.values);
  if (synthesized) {
    std::vector<double> truth;
    for (double nu : nus) truth.push_back(spectral_intensity(pump, nu));
    t.add_column("P_true", truth);
    const double err = relative_l2(result.pump.values, truth);
    m["relative_l2_vs_truth"] = err;
    t.comments.push_back("relative L2 vs pump = " + sci(err));
  }

  if (!s.lambdas.empty()) {
    CsvTable sweep;
    sweep.comments.push_back("biphoton invert lambda sweep");
    sweep.comments.push_back("config_hash: fnv1a64:" + config_hash_hex(c));
    std::vector<double> residuals;
    for (double lambda : s.lambdas) {
      InversionOptions o = options;
      o.lambda = lambda;
      try {
        residuals.push_back(invert_pump_spectrum(measured, crystal, c.consts, o).residual);
      } catch (const IllPosedInversionError& e) {
        residuals.push_back(e.best_estimate().residual);
      }
    }
    sweep.add_column("lambda", s.lambdas);
    sweep.add_column("residual", residuals);
    m["lambda_sweep"] = {{"lambda", s.lambdas}, {"residual", residuals}};
    out.extra_files.emplace_back(".lambda_sweep.csv", sweep.render());
  }
  out.csv = t.render();
  out.manifest = m.dump(2);
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write output file '" + path + "'");
  f << content;
}

}  // namespace

std::vector<std::string> command_names() {
  return {"mean-photons", "spectrum", "hom", "scan", "invert"};
}

RunConfig load_run_config(const RunRequest& request) {
  RunConfig config;
  if (request.preset) apply_preset(config, *request.preset);
  if (request.config_path) apply_config_file(config, *request.config_path);
  if (request.kind) set_value(config, "scan.kind", *request.kind);
  if (request.lambda) {
    if (!(*request.lambda > 0.0)) throw ConfigError("--lambda: must be > 0");
    config.invert.lambda = *request.lambda;
  }
  if (request.input) config.invert.input = *request.input;
  validate(config);
  return config;
}

RunResult execute(const RunConfig& config, const RunRequest& request) {
  RunResult result;
  try {
    if (request.command == "mean-photons") return cmd_mean_photons(config, request);
    if (request.command == "spectrum") return cmd_spectrum(config, request);
    if (request.command == "hom") return cmd_hom(config, request);
    if (request.command == "scan") return cmd_scan(config, request);
    if (request.command == "invert") return cmd_invert(config, request);
    result.exit_code = kExitUsage;
    result.message = "unknown command '" + request.command + "'";
  } catch (const ConfigError& e) {
    result.exit_code = kExitConfig;
    result.message = e.what();
  } catch (const DomainError& e) {
    result.exit_code = kExitConfig;
    result.message = e.what();
  } catch (const NumericalError& e) {
    result.exit_code = kExitNumerical;
    result.message = e.what();
  }
  return result;
}

int run(const RunRequest& request, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = load_run_config(request);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const RunResult result = execute(config, request);
  if (result.csv.empty()) {
    err << "error: " << result.message << "\n";
    return result.exit_code;
  }
  const std::string path = request.out.value_or(config.output_path);
  try {
    if (path.empty()) {
      out << result.csv;
    } else {
      write_file(path, result.csv);
      write_file(path + ".manifest.json", result.manifest + "\n");
      for (const auto& [suffix, content] : result.extra_files) write_file(path + suffix, content);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (result.exit_code != kExitOk) err << "error: " << result.message << "\n";
  return result.exit_code;
}

}  // namespace biphoton::app
