#include "biphoton/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "biphoton/error.hpp"

namespace biphoton::app {

namespace {

using Slot = std::variant<double*, std::optional<double>*, int*, std::size_t*, std::string*,
                          std::vector<double>*>;

std::map<std::string, Slot, std::less<>> bindings(RunConfig& c) {
  return {
      {"pump.xi1", &c.pump.xi1},
      {"pump.tau1", &c.pump.tau1},
      {"pump.a1", &c.pump.a1},
      {"pump.xi2", &c.pump.xi2},
      {"pump.tau2", &c.pump.tau2},
      {"pump.a2", &c.pump.a2},
      {"pump.theta", &c.pump.theta},
      {"pump.phi", &c.pump.phi},
      {"crystal.L", &c.crystal.L},
      {"crystal.inv_vp", &c.crystal.inv_vp},
      {"crystal.inv_v1", &c.crystal.inv_v1},
      {"crystal.inv_v2", &c.crystal.inv_v2},
      {"crystal.omega0_1", &c.crystal.omega0_1},
      {"crystal.omega0_2", &c.crystal.omega0_2},
      {"delay.inv_g1", &c.delay.inv_g1},
      {"delay.inv_g2", &c.delay.inv_g2},
      {"consts.c_N", &c.consts.c_n},
      {"consts.c_S", &c.consts.c_s},
      {"consts.c_A_sq", &c.consts.c_a_sq},
      {"quad.rel_tol", &c.quad.rel_tol},
      {"quad.abs_tol", &c.quad.abs_tol},
      {"quad.max_depth", &c.quad.max_depth},
      {"quad.truncation_eps", &c.quad.truncation_eps},
      {"mean_photons.field", &c.mean_photons.field},
      {"mean_photons.tau_min", &c.mean_photons.tau_min},
      {"mean_photons.tau_max", &c.mean_photons.tau_max},
      {"mean_photons.n", &c.mean_photons.n},
      {"spectrum.field", &c.spectrum.field},
      {"spectrum.nu_min", &c.spectrum.nu_min},
      {"spectrum.nu_max", &c.spectrum.nu_max},
      {"spectrum.n", &c.spectrum.n},
      {"spectrum.thetas", &c.spectrum.thetas},
      {"hom.tau_l_min", &c.hom.tau_l_min},
      {"hom.tau_l_max", &c.hom.tau_l_max},
      {"hom.n", &c.hom.n},
      {"hom.phis", &c.hom.phis},
      {"scan.kind", &c.scan.kind},
      {"scan.theta_min", &c.scan.theta_min},
      {"scan.theta_max", &c.scan.theta_max},
      {"scan.theta_n", &c.scan.theta_n},
      {"scan.phi_min", &c.scan.phi_min},
      {"scan.phi_max", &c.scan.phi_max},
      {"scan.phi_n", &c.scan.phi_n},
      {"scan.tau0_list", &c.scan.tau0_list},
      {"scan.chirp", &c.scan.chirp},
      {"scan.tau_l_points", &c.scan.tau_l_points},
      {"invert.field", &c.invert.field},
      {"invert.input", &c.invert.input},
      {"invert.lambda", &c.invert.lambda},
      {"invert.lambdas", &c.invert.lambdas},
      {"invert.nu_min", &c.invert.nu_min},
      {"invert.nu_max", &c.invert.nu_max},
      {"invert.n", &c.invert.n},
      {"output.path", &c.output_path},
  };
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_plain(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

long long parse_integer(std::string_view s) {
  s = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto item = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    if (item.empty()) throw ConfigError("empty list element in '" + std::string(s) + "'");
    out.push_back(parse_number(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void assign(const Slot& slot, std::string_view value) {
  std::visit(
      [&](auto* p) {
        using T = std::remove_pointer_t<decltype(p)>;
        // Strings and lists may be empty; everything else needs a value.
        if constexpr (!std::is_same_v<T, std::string> && !std::is_same_v<T, std::vector<double>>) {
          if (value.empty()) throw ConfigError("missing value");
        }
        if constexpr (std::is_same_v<T, double>) {
          *p = parse_number(value);
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
          if (value == "auto") {
            p->reset();
          } else {
            *p = parse_number(value);
          }
        } else if constexpr (std::is_same_v<T, int>) {
          *p = static_cast<int>(parse_integer(value));
        } else if constexpr (std::is_same_v<T, std::size_t>) {
          const long long v = parse_integer(value);
          if (v < 0) throw ConfigError("expected a non-negative integer");
          *p = static_cast<std::size_t>(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          *p = std::string(value);
        } else if (value.empty()) {
          p->clear();
        } else {
          *p = parse_list(value);
        }
      },
      slot);
}

std::string render(const Slot& slot) {
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_g17(*p);
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
          return p->has_value() ? format_g17(**p) : "auto";
        } else if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::size_t>) {
          return std::to_string(*p);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return *p;
        } else {
          std::string s;
          for (std::size_t i = 0; i < p->size(); ++i) {
            if (i > 0) s += ",";
            s += format_g17((*p)[i]);
          }
          return s;
        }
      },
      slot);
}

[[noreturn]] void fail(std::string_view key, const std::string& why) {
  throw ConfigError(std::string(key) + ": " + why);
}

void require_finite(std::string_view key, double v) {
  if (!std::isfinite(v)) fail(key, "must be finite");
}

void require_positive(std::string_view key, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(key, "must be a positive finite number");
}

void require_field(std::string_view key, int v) {
  if (v != 1 && v != 2) fail(key, "field index must be 1 or 2, got " + std::to_string(v));
}

void require_grid(std::string_view prefix, double lo, double hi, std::size_t n) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    fail(prefix, "grid needs finite bounds with min < max");
  }
  if (n < 2) fail(std::string(prefix) + ".n", "grid needs at least 2 points");
}

}  // namespace

double parse_number(std::string_view text) {
  const auto s = trim(text);
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    auto coeff = trim(s.substr(0, s.size() - 2));
    if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
    double c = 1.0;
    if (coeff == "-") {
      c = -1.0;
    } else if (!coeff.empty() && coeff != "+") {
      c = parse_plain(coeff);
    }
    return c * kPi;
  }
  return parse_plain(s);
}

void set_value(RunConfig& config, std::string_view key, std::string_view value) {
  auto table = bindings(config);
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown key '" + std::string(key) + "'");
  try {
    assign(it->second, trim(value));
  } catch (const ConfigError& e) {
    fail(key, e.what());
  }
}

void apply_config_text(RunConfig& config, std::string_view text, std::string_view source) {
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  const std::string where = source.empty() ? std::string("line ") : std::string(source) + ":";
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string at = where + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(at + ": expected 'section.key = value', got '" + std::string(line) + "'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError(at + ": duplicate key '" + std::string(key) + "'");
    }
    try {
      set_value(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(at + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(config, buf.str(), path);
}

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

std::string preset_command(std::string_view name) {
  if (name == "fig2") return "mean-photons";
  if (name == "fig3") return "spectrum";
  if (name == "fig4" || name == "fig7") return "hom";
  if (name == "fig5" || name == "fig6" || name == "fig8" || name == "fig9") return "scan";
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

void apply_preset(RunConfig& config, std::string_view name) {
  preset_command(name);
  RunConfig c;
  c.preset = std::string(name);
  auto& p = c.pump;
  // Two identical unchirped pulses on a 1.5 mm crystal, |C_A|^2 = 10.
  p.xi1 = 1.0;
  p.tau1 = 1e-13;
  p.xi2 = 1.0;
  p.tau2 = 1e-13;
  c.consts.c_a_sq = 10.0;
  if (name == "fig2") {
    p.tau2 = 0.5e-13;
    p.a2 = 10.0;
    c.crystal.L = 0.05;
    c.consts.c_n = 1.0;
    c.mean_photons.field = 1;
  } else if (name == "fig3") {
    c.crystal.L = 10.0;
    c.consts.c_s = 1.0;
    c.spectrum.field = 1;
    c.spectrum.thetas = {0.0, 3e-13, 10e-13, 50e-13};
  } else if (name == "fig4") {
    p.tau2 = 0.5e-13;
    p.xi2 = 1.5;
    p.phi = kPi;
    c.hom.phis = {kPi};
  } else if (name == "fig5") {
    c.scan.kind = "r0-vs-theta";
  } else if (name == "fig6") {
    c.scan.kind = "vis-vs-theta";
  } else if (name == "fig7") {
    p.theta = 2.04e-13;
    c.hom.phis = {kPi, 0.0};
  } else if (name == "fig8") {
    p.theta = 2.04e-13;
    c.scan.kind = "vis-vs-phi";
  } else if (name == "fig9") {
    c.scan.kind = "thetamax-vs-tau0";
    c.scan.theta_max = 1e-12;
  }
  config = std::move(c);
}

void validate(const RunConfig& c) {
  const auto& p = c.pump;
  for (auto [key, v] : {std::pair{"pump.xi1", p.xi1}, std::pair{"pump.xi2", p.xi2}}) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(key, "amplitude must be finite and >= 0");
  }
  require_positive("pump.tau1", p.tau1);
  require_positive("pump.tau2", p.tau2);
  require_finite("pump.a1", p.a1);
  require_finite("pump.a2", p.a2);
  require_finite("pump.theta", p.theta);
  require_finite("pump.phi", p.phi);

  require_positive("crystal.L", c.crystal.L);
  require_positive("crystal.inv_vp", c.crystal.inv_vp);
  require_positive("crystal.inv_v1", c.crystal.inv_v1);
  require_positive("crystal.inv_v2", c.crystal.inv_v2);
  require_finite("crystal.omega0_1", c.crystal.omega0_1);
  require_finite("crystal.omega0_2", c.crystal.omega0_2);
  if (c.crystal.inv_v1 == c.crystal.inv_v2) {
    fail("crystal.inv_v2", "must differ from crystal.inv_v1 (D = 0 is degenerate)");
  }
  require_positive("delay.inv_g1", c.delay.inv_g1);
  require_positive("delay.inv_g2", c.delay.inv_g2);
  if (c.delay.inv_g1 == c.delay.inv_g2) {
    fail("delay.inv_g2", "must differ from delay.inv_g1 (the delay line would not delay)");
  }
  for (auto [key, v] : {std::pair{"consts.c_N", c.consts.c_n}, std::pair{"consts.c_S", c.consts.c_s},
                        std::pair{"consts.c_A_sq", c.consts.c_a_sq}}) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(key, "must be finite and >= 0");
  }
  require_positive("quad.rel_tol", c.quad.rel_tol);
  require_positive("quad.abs_tol", c.quad.abs_tol);
  if (c.quad.max_depth < 1) fail("quad.max_depth", "must be >= 1");
  if (!(c.quad.truncation_eps > 0.0 && c.quad.truncation_eps < 1.0)) {
    fail("quad.truncation_eps", "must lie in (0, 1)");
  }

  require_field("mean_photons.field", c.mean_photons.field);
  require_grid("mean_photons", c.mean_photons.tau_min, c.mean_photons.tau_max, c.mean_photons.n);
  require_field("spectrum.field", c.spectrum.field);
  require_grid("spectrum", c.spectrum.nu_min, c.spectrum.nu_max, c.spectrum.n);
  if (c.spectrum.thetas.empty()) fail("spectrum.thetas", "needs at least one value");
  for (double t : c.spectrum.thetas) require_finite("spectrum.thetas", t);

  if (c.hom.tau_l_min && c.hom.tau_l_max) {
    require_grid("hom", *c.hom.tau_l_min, *c.hom.tau_l_max, c.hom.n);
  } else if (c.hom.n < 2) {
    fail("hom.n", "grid needs at least 2 points");
  }
  if (c.hom.phis.empty()) fail("hom.phis", "needs at least one value");
  for (double v : c.hom.phis) require_finite("hom.phis", v);

  static const std::set<std::string, std::less<>> kinds = {"r0-vs-theta", "vis-vs-theta",
                                                           "vis-vs-phi", "thetamax-vs-tau0"};
  if (!kinds.contains(c.scan.kind)) {
    fail("scan.kind",
         "must be one of r0-vs-theta, vis-vs-theta, vis-vs-phi, thetamax-vs-tau0; got '" +
             c.scan.kind + "'");
  }
  require_grid("scan.theta", c.scan.theta_min, c.scan.theta_max, c.scan.theta_n);
  require_grid("scan.phi", c.scan.phi_min, c.scan.phi_max, c.scan.phi_n);
  if (c.scan.tau0_list.empty()) fail("scan.tau0_list", "needs at least one value");
  for (double t : c.scan.tau0_list) require_positive("scan.tau0_list", t);
  require_finite("scan.chirp", c.scan.chirp);
  if (c.scan.tau_l_points < 3) fail("scan.tau_l_points", "must be >= 3");

  require_field("invert.field", c.invert.field);
  require_positive("invert.lambda", c.invert.lambda);
  for (double l : c.invert.lambdas) require_positive("invert.lambdas", l);
  require_grid("invert", c.invert.nu_min, c.invert.nu_max, c.invert.n);

  // Cross-checks through the library constructors.
  try {
    (void)c.pump_field();
    (void)c.crystal_params();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("pump/crystal: ") + e.what());
  }
}

PumpField RunConfig::pump_field() const {
  return PumpField(PumpPulse(pump.xi1, pump.tau1, pump.a1), PumpPulse(pump.xi2, pump.tau2, pump.a2),
                   pump.theta, pump.phi);
}

CrystalParams RunConfig::crystal_params() const {
  return CrystalParams(crystal.L, crystal.inv_vp, crystal.inv_v1, crystal.inv_v2, crystal.omega0_1,
                       crystal.omega0_2);
}

DelayLine RunConfig::delay_line() const { return DelayLine(delay.inv_g1, delay.inv_g2); }

std::vector<std::pair<std::string, std::string>> canonical_entries(const RunConfig& config) {
  auto table = bindings(const_cast<RunConfig&>(config));
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, slot] : table) {
    if (key == "output.path") continue;
    out.emplace_back(key, render(slot));
  }
  return out;
}

std::uint64_t config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [key, value] : canonical_entries(config)) {
    for (char ch : key + "=" + value + "\n") {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string config_hash_hex(const RunConfig& config) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(config)));
  return buf;
}

}  // namespace biphoton::app
