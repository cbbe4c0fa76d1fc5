#include "biphoton/two_photon.hpp"

#include <algorithm>
#include <cmath>

namespace biphoton {

namespace {

Mismatch require_positive_d(const CrystalParams& crystal) {
  const Mismatch m = crystal.mismatch();
  if (!(m.d > 0.0)) {
    throw DegenerateGeometryError("two-photon quantities need D = 1/v_1 - 1/v_2 != 0");
  }
  return m;
}

cdouble component_envelope(const PumpField::Component& c, double t) {
  return std::polar(1.0, c.phase) * c.pulse.envelope(t + c.delay);
}

IntervalSet component_support(const PumpField::Component& c, double eps, double t_ref) {
  if (c.pulse.xi() == 0.0) return {};
  const double w = c.pulse.time_half_width(eps);
  return IntervalSet({(-c.delay - w) / t_ref, (-c.delay + w) / t_ref});
}

IntervalSet scaled_support(const PumpField& field, double eps, double t_ref) {
  IntervalSet out;
  const IntervalSet support = field.time_support(eps);
  for (const auto& p : support.parts()) out.add({p.lo / t_ref, p.hi / t_ref});
  return out;
}

// int dT g(T) over a support given in units of t_ref; returns the integral
// in units of t_ref (the caller multiplies back).
double integrate_scaled(const std::function<double(double)>& g, const IntervalSet& support,
                        const QuadSpec& spec) {
  if (support.empty()) return 0.0;
  return integrate_segments(g, support.parts(), spec).value;
}

// Energy int |E|^2 dT, in units of t_ref * intensity_bound.
double scaled_energy(const PumpField& field, double t_ref, double i_ref, const QuadSpec& spec) {
  return integrate_scaled(
      [&](double x) { return std::norm(envelope_time(field, x * t_ref)) / i_ref; },
      scaled_support(field, spec.truncation_eps, t_ref), spec);
}

double r0_prefactor(const CrystalParams& crystal, const Mismatch& m,
                    const NormalizationConstants& consts) {
  return consts.c_a_sq * crystal.length() / (2.0 * m.d);
}

void require_nonzero_r0(double r0, double scale) {
  if (!(std::abs(r0) > 1e-12 * scale)) {
    throw DomainError("R0 vanishes for this pump (destructive interference); rho is undefined");
  }
}

// int_{-h}^{h} dtau int dT Re{f(a tau + T) conj(g(-a tau + T))}, scaled by
// t_ref in both variables and by i_ref in value.
double correlation_integral(const std::function<cdouble(double)>& f, const IntervalSet& f_support,
                            const std::function<cdouble(double)>& g, const IntervalSet& g_support,
                            double a, double h_scaled, double t_ref, double i_ref,
                            const QuadSpec& spec) {
  if (f_support.empty() || g_support.empty() || !(h_scaled > 0.0)) return 0.0;
  const auto domain = [&](double s) {
    return f_support.shifted(-a * s).intersect(g_support.shifted(a * s));
  };
  const auto integrand = [&](double s, double x) {
    return std::real(f((a * s + x) * t_ref) * std::conj(g((-a * s + x) * t_ref))) / i_ref;
  };
  const double mid[] = {-h_scaled, 0.0, h_scaled};
  return integrate_2d_nested(integrand, -h_scaled, h_scaled, domain, spec, mid).value;
}

RhoParts rho_gaussian_impl(const PumpField& field, const CrystalParams& crystal, double tau_l,
                           const NormalizationConstants& consts, const QuadSpec& spec,
                           double r0) {
  const Mismatch m = require_positive_d(crystal);
  const double h = overlap_half_width(crystal, tau_l);
  if (!(h > 0.0)) return {};
  const auto comps = field.components();
  const double a = m.lambda / m.d;
  const double scale = std::sqrt(kPi) * consts.c_a_sq / (r0 * m.d * m.d);
  const double t_ref = field.time_scale();

  const auto auto_term = [&](double tau) {
    double sum = 0.0;
    for (const auto& c : comps) {
      const double xi = c.pulse.xi();
      const double tj = c.pulse.tau();
      const double ch = c.pulse.chirp();
      if (xi == 0.0) continue;
      sum += xi * xi * tj * std::exp(-2.0 * (1.0 + ch * ch) * (a * tau) * (a * tau) / (tj * tj));
    }
    return scale / (2.0 * std::sqrt(2.0)) * sum;
  };

  QuadSpec local = spec;
  const double lim = h / t_ref;
  const double pts[] = {-lim, 0.0, lim};
  RhoParts out;
  out.rho1 = integrate_1d([&](double s) { return auto_term(s * t_ref) * t_ref; }, pts, local).value;

  if (comps.size() == 2 && comps[0].pulse.xi() != 0.0 && comps[1].pulse.xi() != 0.0) {
    const cdouble a1 = comps[0].pulse.alpha();
    const cdouble a2c = std::conj(comps[1].pulse.alpha());
    const cdouble sum = a1 + a2c;
    const cdouble expo = a1 * a2c / sum;
    const cdouble pref = std::polar(1.0, -(comps[1].phase - comps[0].phase)) / std::sqrt(sum);
    const double theta = comps[1].delay - comps[0].delay;
    const double xi12 = comps[0].pulse.xi() * comps[1].pulse.xi();
    const auto cross = [&](double tau) {
      const double arg = theta - 2.0 * a * tau;
      return scale * xi12 * std::real(pref * std::exp(-expo * arg * arg));
    };
    // Fringes of a chirped cross term oscillate in tau.
    const double omega = 4.0 * std::abs(a) * std::abs(expo.imag()) * std::abs(theta) * t_ref;
    const auto split = oscillation_breakpoints(-lim, lim, omega);
    const auto bps = merge_breakpoints(-lim, lim, {std::span<const double>(pts),
                                                   std::span<const double>(split)});
    out.rho2 = integrate_1d([&](double s) { return cross(s * t_ref) * t_ref; }, bps, local).value;
  }
  return out;
}

struct TwoPulseEnergies {
  double autos = 0.0;  // sum of |E_k|^2 integrals
  double cross = 0.0;  // 2 Re of the overlap integrals
};

TwoPulseEnergies two_pulse_energies(const PumpField& field, double t_ref, double i_ref,
                                    const QuadSpec& spec) {
  const auto comps = field.components();
  TwoPulseEnergies e;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto sk = component_support(comps[k], spec.truncation_eps, t_ref);
    e.autos += integrate_scaled(
        [&](double x) { return std::norm(component_envelope(comps[k], x * t_ref)) / i_ref; }, sk,
        spec);
    // Overlap integrands are products of two amplitudes: cut each factor
    // where its amplitude reaches eps.
    const double eps = spec.truncation_eps * spec.truncation_eps;
    const auto wide_k = component_support(comps[k], eps, t_ref);
    for (std::size_t l = k + 1; l < comps.size(); ++l) {
      const auto sl = component_support(comps[l], eps, t_ref);
      e.cross += integrate_scaled(
          [&](double x) {
            return 2.0 *
                   std::real(component_envelope(comps[k], x * t_ref) *
                             std::conj(component_envelope(comps[l], x * t_ref))) /
                   i_ref;
          },
          wide_k.intersect(sl), spec);
    }
  }
  return e;
}

RhoParts rho_two_pulse_impl(const PumpField& field, const CrystalParams& crystal, double tau_l,
                            const QuadSpec& spec, double energy_scaled) {
  const Mismatch m = require_positive_d(crystal);
  const double h = overlap_half_width(crystal, tau_l);
  if (!(h > 0.0)) return {};
  const auto comps = field.components();
  const double t_ref = field.time_scale();
  const double i_ref = field.intensity_bound();
  const double a = m.lambda / m.d;
  const double norm = t_ref / (crystal.dip_width() * energy_scaled);
  // The integrand is a product of two envelopes, so each factor is cut where
  // its amplitude (not its intensity) reaches eps.
  const double eps = spec.truncation_eps * spec.truncation_eps;

  RhoParts out;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    for (std::size_t l = 0; l < comps.size(); ++l) {
      const auto fk = [&](double t) { return component_envelope(comps[k], t); };
      const auto fl = [&](double t) { return component_envelope(comps[l], t); };
      const double v = correlation_integral(
          fk, component_support(comps[k], eps, t_ref), fl, component_support(comps[l], eps, t_ref),
          a, h / t_ref, t_ref, i_ref,
          spec);
      (k == l ? out.rho1 : out.rho2) += norm * v;
    }
  }
  return out;
}

}  // namespace

cdouble two_photon_amplitude(const PumpField& field, const CrystalParams& crystal, double t0,
                             double tau, const NormalizationConstants& consts) {
  const Mismatch m = require_positive_d(crystal);
  if (rect(tau / crystal.dip_width()) == 0.0) return {};
  const double c_a = std::sqrt(consts.c_a_sq);
  return c_a / m.d * envelope_time(field, m.lambda / m.d * tau + t0) *
         std::polar(1.0, -2.0 * crystal.omega0_1() * t0);
}

double overlap_half_width(const CrystalParams& crystal, double tau_l) {
  const double half = 0.5 * crystal.dip_width();
  return std::max(0.0, half - std::abs(tau_l - half));
}

double R0_general(const PumpField& field, const CrystalParams& crystal,
                  const NormalizationConstants& consts, const QuadSpec& spec) {
  spec.validate();
  consts.validate();
  const Mismatch m = require_positive_d(crystal);
  if (field.is_zero()) return 0.0;
  const double t_ref = field.time_scale();
  const double i_ref = field.intensity_bound();
  return r0_prefactor(crystal, m, consts) * scaled_energy(field, t_ref, i_ref, spec) * t_ref *
         i_ref;
}

double rho_general(const PumpField& field, const CrystalParams& crystal, double tau_l,
                   const NormalizationConstants& consts, const QuadSpec& spec) {
  spec.validate();
  consts.validate();
  const Mismatch m = require_positive_d(crystal);
  const double h = overlap_half_width(crystal, tau_l);
  if (!(h > 0.0)) return 0.0;
  if (field.is_zero()) throw DomainError("R0 vanishes for a zero pump; rho is undefined");
  const double t_ref = field.time_scale();
  const double i_ref = field.intensity_bound();
  const double energy = scaled_energy(field, t_ref, i_ref, spec);
  require_nonzero_r0(energy, 1.0 / field.components().size());
  const auto support = scaled_support(field, spec.truncation_eps * spec.truncation_eps, t_ref);
  const auto e = [&](double t) { return envelope_time(field, t); };
  const double v = correlation_integral(e, support, e, support, m.lambda / m.d, h / t_ref, t_ref,
                                        i_ref, spec);
  return t_ref * v / (crystal.dip_width() * energy);
}

RhoParts rho_two_pulse(const PumpField& field, const CrystalParams& crystal, double tau_l,
                       const NormalizationConstants& consts, const QuadSpec& spec) {
  if (!field.is_two_pulse()) throw DomainError("rho_two_pulse needs a two-pulse pump");
  const R0Parts r0 = R0_two_pulse(field, crystal, consts, spec);
  require_nonzero_r0(r0.total(), r0.r01);
  const double t_ref = field.time_scale();
  const double i_ref = field.intensity_bound();
  const double energy = r0.total() / (r0_prefactor(crystal, crystal.mismatch(), consts) * t_ref *
                                      i_ref);
  return rho_two_pulse_impl(field, crystal, tau_l, spec, energy);
}

R0Parts R0_two_pulse(const PumpField& field, const CrystalParams& crystal,
                     const NormalizationConstants& consts, const QuadSpec& spec) {
  if (!field.is_two_pulse()) throw DomainError("R0_two_pulse needs a two-pulse pump");
  spec.validate();
  consts.validate();
  const Mismatch m = require_positive_d(crystal);
  if (field.is_zero()) return {};
  const double t_ref = field.time_scale();
  const double i_ref = field.intensity_bound();
  const auto e = two_pulse_energies(field, t_ref, i_ref, spec);
  const double scale = r0_prefactor(crystal, m, consts) * t_ref * i_ref;
  return {scale * e.autos, scale * e.cross};
}

RhoParts rho_gaussian(const PumpField& field, const CrystalParams& crystal, double tau_l,
                      const NormalizationConstants& consts, const QuadSpec& spec) {
  spec.validate();
  const R0Parts r0 = R0_gaussian(field, crystal, consts);
  require_nonzero_r0(r0.total(), r0.r01);
  return rho_gaussian_impl(field, crystal, tau_l, consts, spec, r0.total());
}

R0Parts R0_gaussian(const PumpField& field, const CrystalParams& crystal,
                    const NormalizationConstants& consts) {
  consts.validate();
  const Mismatch m = require_positive_d(crystal);
  const auto comps = field.components();
  if (comps.size() > 2) throw DomainError("Gaussian closed forms cover at most two pulses");
  const double L = crystal.length();
  R0Parts out;
  for (const auto& c : comps) {
    out.r01 += c.pulse.xi() * c.pulse.xi() * c.pulse.tau();
  }
  out.r01 *= std::sqrt(kPi) * consts.c_a_sq * L / (2.0 * std::sqrt(2.0) * m.d);
  if (comps.size() == 2) {
    const cdouble a1 = comps[0].pulse.alpha();
    const cdouble a2c = std::conj(comps[1].pulse.alpha());
    const cdouble sum = a1 + a2c;
    const double theta = comps[1].delay - comps[0].delay;
    const cdouble z = std::polar(1.0, -(comps[1].phase - comps[0].phase)) / std::sqrt(sum) *
                      std::exp(-a1 * a2c / sum * theta * theta);
    out.r02 = std::sqrt(kPi) * consts.c_a_sq * L * comps[0].pulse.xi() * comps[1].pulse.xi() /
              m.d * z.real();
  }
  return out;
}

const char* to_string(HomMethod method) {
  return method == HomMethod::kGaussianClosedForm ? "gaussian-closed-form" : "generic-quadrature";
}

HomModel::HomModel(PumpField field, CrystalParams crystal, NormalizationConstants consts,
                   HomMethod method, QuadSpec spec)
    : field_(std::move(field)),
      crystal_(crystal),
      consts_(consts),
      method_(method),
      spec_(spec) {
  spec_.validate();
  consts_.validate();
  require_positive_d(crystal_);
  if (field_.is_zero()) throw DomainError("R0 vanishes for a zero pump; rho is undefined");
  if (method_ == HomMethod::kGaussianClosedForm) {
    r0_ = R0_gaussian(field_, crystal_, consts_);
  } else if (field_.is_two_pulse()) {
    r0_ = R0_two_pulse(field_, crystal_, consts_, spec_);
  } else {
    r0_.r01 = R0_general(field_, crystal_, consts_, spec_);
  }
  require_nonzero_r0(r0_.total(), r0_.r01);
}

RhoParts HomModel::rho(double tau_l) const {
  if (method_ == HomMethod::kGaussianClosedForm) {
    return rho_gaussian_impl(field_, crystal_, tau_l, consts_, spec_, r0_.total());
  }
  const double t_ref = field_.time_scale();
  const double energy =
      r0_.total() /
      (r0_prefactor(crystal_, crystal_.mismatch(), consts_) * t_ref * field_.intensity_bound());
  if (field_.is_two_pulse()) return rho_two_pulse_impl(field_, crystal_, tau_l, spec_, energy);
  return {rho_general(field_, crystal_, tau_l, consts_, spec_), 0.0};
}

namespace {

Interferogram sample(const HomModel& model, const DelayLine* delay,
                     std::span<const double> taus, unsigned threads) {
  Interferogram ig;
  ig.tau_l.assign(taus.begin(), taus.end());
  ig.r_n.resize(taus.size());
  ig.rho1.resize(taus.size());
  ig.rho2.resize(taus.size());
  ig.r0 = model.r0();
  ig.dip_width = model.crystal().dip_width();
  ig.method = model.method();
  parallel_for(taus.size(), threads, [&](std::size_t i) {
    const RhoParts r = model.rho(taus[i]);
    ig.rho1[i] = r.rho1;
    ig.rho2[i] = r.rho2;
    ig.r_n[i] = 1.0 - r.total();
  });
  if (delay != nullptr) {
    for (double t : ig.tau_l) ig.length_mm.push_back(delay->length_for_delay(t));
  }
  return ig;
}

void check_coverage(const Interferogram& ig) {
  const double dl = ig.dip_width;
  const double slack = 1e-6 * dl;
  if (ig.tau_l.size() < 3 || ig.tau_l.front() > -0.1 * dl + slack ||
      ig.tau_l.back() < 1.1 * dl - slack) {
    throw DomainError("visibility needs an interferogram covering [-0.1 DL, 1.1 DL]");
  }
}

}  // namespace

Interferogram interferogram(const HomModel& model, const DelayLine& delay,
                            std::span<const double> tau_l, unsigned threads) {
  return sample(model, &delay, tau_l, threads);
}

Interferogram interferogram(const HomModel& model, const DelayLine& delay,
                            const GridSpec& tau_l_grid, unsigned threads) {
  tau_l_grid.validate();
  const auto taus = tau_l_grid.points();
  return sample(model, &delay, taus, threads);
}

Interferogram interferogram_over_length(const HomModel& model, const DelayLine& delay,
                                        const GridSpec& length_grid, unsigned threads) {
  length_grid.validate();
  const auto lengths = length_grid.points();
  std::vector<double> taus;
  taus.reserve(lengths.size());
  for (double l : lengths) taus.push_back(tau_l_of_length(delay, l));
  Interferogram ig = sample(model, nullptr, taus, threads);
  ig.length_mm = lengths;
  return ig;
}

GridSpec default_tau_l_grid(const CrystalParams& crystal, std::size_t n) {
  const double dl = crystal.dip_width();
  return GridSpec{-0.1 * dl, 1.1 * dl, n};
}

VisibilityResult visibility(const Interferogram& ig, const Integrand& r_n) {
  check_coverage(ig);
  const auto& y = ig.r_n;
  const auto& x = ig.tau_l;
  double deviation = 0.0;
  for (double v : y) deviation = std::max(deviation, std::abs(v - 1.0));
  if (deviation <= 1e-12) {
    throw UndefinedVisibilityError("interferogram is flat; visibility is undefined");
  }
  const double tol = 1e-9 * ig.dip_width;
  const auto refine = [&](std::size_t k, double sign) {
    ScalarOptimum best{x[k], y[k]};
    if (r_n && k > 0 && k + 1 < y.size()) {
      const auto opt =
          golden_section_minimize([&](double t) { return sign * r_n(t); }, x[k - 1], x[k + 1], tol);
      if (sign * opt.value < sign * best.value) best = {opt.argument, sign * opt.value};
    }
    return best;
  };

  VisibilityResult out;
  const auto k_min = static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin());
  const ScalarOptimum lo = refine(k_min, 1.0);
  out.r_min = lo.value;
  out.location = lo.argument;
  const auto k_max = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  if (y[k_max] > 1.0) {
    out.r_max = refine(k_max, -1.0).value;
    out.max_from_scan = true;
  }
  const double denom = out.r_max + out.r_min;
  if (!(denom > 0.0)) throw UndefinedVisibilityError("R_max + R_min vanishes");
  out.v = (out.r_max - out.r_min) / denom;
  return out;
}

VisibilityResult visibility(const HomModel& model, std::size_t n) {
  const auto taus = default_tau_l_grid(model.crystal(), n).points();
  const Interferogram ig = sample(model, nullptr, taus, 1);
  return visibility(ig, [&](double t) { return model.r_n(t); });
}

namespace {

// Fills scan.arg_max / max_value from the samples and, for an interior
// sample maximum, refines it; a failed golden search is retried once on a
// bracket re-derived from a dense scan.
void locate_maximum(VisibilityScan& scan, const Integrand& v_of_x, double step) {
  const auto k = static_cast<std::size_t>(std::max_element(scan.v.begin(), scan.v.end()) -
                                          scan.v.begin());
  scan.arg_max = scan.x[k];
  scan.max_value = scan.v[k];
  scan.has_interior_max = k > 0 && k + 1 < scan.v.size();
  if (!scan.has_interior_max) return;
  const double tol = 1e-4 * step;
  double a = scan.x[k - 1];
  double b = scan.x[k + 1];
  ScalarOptimum opt;
  try {
    opt = maximize_scalar(v_of_x, a, b, tol);
  } catch (const NotUnimodalError&) {
    const GridSpec dense{a, b, 41};
    const auto xs = dense.points();
    std::vector<double> vs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) vs[i] = v_of_x(xs[i]);
    const auto j = static_cast<std::size_t>(std::max_element(vs.begin(), vs.end()) - vs.begin());
    a = xs[j == 0 ? 0 : j - 1];
    b = xs[j + 1 == xs.size() ? j : j + 1];
    opt = maximize_scalar(v_of_x, a, b, tol);
  }
  if (opt.value >= scan.max_value) {
    scan.arg_max = opt.argument;
    scan.max_value = opt.value;
  }
}

VisibilityScan scan_parameter(const GridSpec& grid, const ScanOptions& options,
                              const std::function<HomModel(double)>& model_at) {
  grid.validate();
  VisibilityScan scan;
  scan.x = grid.points();
  scan.v.resize(scan.x.size());
  const auto v_of = [&](double x) { return visibility(model_at(x), options.tau_l_points).v; };
  parallel_for(scan.x.size(), options.threads, [&](std::size_t i) { scan.v[i] = v_of(scan.x[i]); });
  locate_maximum(scan, v_of, grid.step());
  return scan;
}

}  // namespace

VisibilityScan visibility_vs_theta(const PumpField& tmpl, const CrystalParams& crystal,
                                   const GridSpec& thetas, const NormalizationConstants& consts,
                                   const ScanOptions& options) {
  if (!tmpl.is_two_pulse()) throw DomainError("visibility_vs_theta needs a two-pulse pump");
  return scan_parameter(thetas, options, [&](double theta) {
    return HomModel(tmpl.with_theta(theta), crystal, consts, options.method, options.spec);
  });
}

VisibilityScan visibility_vs_phi(const PumpField& tmpl, const CrystalParams& crystal,
                                 const GridSpec& phis, const NormalizationConstants& consts,
                                 const ScanOptions& options) {
  if (!tmpl.is_two_pulse()) throw DomainError("visibility_vs_phi needs a two-pulse pump");
  return scan_parameter(phis, options, [&](double phi) {
    return HomModel(tmpl.with_phi(phi), crystal, consts, options.method, options.spec);
  });
}

std::vector<ThetaMaxPoint> theta_max_vs_tau0(std::span<const double> tau0s, double chirp,
                                             const CrystalParams& crystal,
                                             const GridSpec& thetas,
                                             const NormalizationConstants& consts,
                                             const ScanOptions& options) {
  std::vector<ThetaMaxPoint> out;
  for (double tau0 : tau0s) {
    const PumpPulse pulse(1.0, tau0, chirp);
    const PumpField tmpl(pulse, pulse, 0.0, 0.0);
    const VisibilityScan scan = visibility_vs_theta(tmpl, crystal, thetas, consts, options);
    if (!scan.has_interior_max) {
      throw NotUnimodalError("no interior visibility maximum on the theta grid for tau0 = " +
                             std::to_string(tau0));
    }
    out.push_back({tau0, scan.arg_max, scan.max_value});
  }
  return out;
}

std::vector<R0ScanPoint> r0_vs_theta(const PumpField& tmpl, const CrystalParams& crystal,
                                     const GridSpec& thetas, const NormalizationConstants& consts) {
  if (!tmpl.is_two_pulse()) throw DomainError("r0_vs_theta needs a two-pulse pump");
  thetas.validate();
  std::vector<R0ScanPoint> out;
  for (double theta : thetas.points()) {
    out.push_back({theta, R0_gaussian(tmpl.with_theta(theta), crystal, consts)});
  }
  return out;
}

}  // namespace biphoton
