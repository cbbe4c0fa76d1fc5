#include "biphoton/one_photon.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace biphoton {

namespace {

// Sign s_j in the phase-matching argument D_{p,3-j} nu_p - s_j D nu_j
// (stored labeling). Energy conservation fixes s_1 = +1 and s_2 = -1.
double spectral_sign(int internal_field) { return internal_field == 1 ? 1.0 : -1.0; }

void require_field(int j) {
  if (j != 1 && j != 2) {
    throw DomainError("field index must be 1 or 2, got " + std::to_string(j));
  }
}

}  // namespace

void SpectrumCurve::validate() const {
  grid.validate();
  if (values.size() != grid.n) {
    throw DomainError("spectrum curve: value count does not match grid");
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError("spectrum curve values must be finite and non-negative");
    }
  }
}

double SpectrumCurve::interpolate(double nu) const {
  if (nu < grid.lo || nu > grid.hi) return 0.0;
  const double pos = (nu - grid.lo) / grid.step();
  const auto k = std::min(static_cast<std::size_t>(pos), grid.n - 2);
  const double frac = pos - static_cast<double>(k);
  return values[k] + frac * (values[k + 1] - values[k]);
}

double mean_photon_number(const PumpField& field, const CrystalParams& crystal, int j,
                          double tau, const NormalizationConstants& consts,
                          const QuadSpec& spec) {
  require_field(j);
  consts.validate();
  const Mismatch m = crystal.mismatch();
  if (m.d == 0.0) {
    throw DegenerateGeometryError("mean photon number needs D = 1/v_1 - 1/v_2 != 0");
  }
  const double prefactor = 4.0 * kPi * kPi * consts.c_n / std::abs(m.d);
  if (field.is_zero()) return 0.0;

  const double L = crystal.length();
  const double shift = m.dp(crystal.internal_field(j)) * L;
  if (shift == 0.0) return prefactor * L * std::norm(envelope_time(field, tau));

  const double u0 = std::min(tau, tau + shift);
  const double u1 = std::max(tau, tau + shift);
  const double t_ref = field.time_scale();
  const double i_ref = field.intensity_bound();

  // Integrate in units of t_ref with the intensity normalized to its bound.
  const IntervalSet support =
      field.time_support(spec.truncation_eps).clipped({u0, u1});
  std::vector<Interval> segs;
  for (const auto& p : support.parts()) segs.push_back({p.lo / t_ref, p.hi / t_ref});
  if (segs.empty()) return 0.0;

  QuadSpec scaled = spec;
  scaled.abs_tol = spec.abs_tol * std::min(1.0, (u1 - u0) / t_ref);
  const QuadResult r = integrate_segments(
      [&](double x) { return std::norm(envelope_time(field, x * t_ref)) / i_ref; }, segs, scaled);
  const double mean_intensity = r.value * t_ref * i_ref / (u1 - u0);
  return prefactor * L * mean_intensity;
}

PhotonNumberCurve photon_number_curve(const PumpField& field, const CrystalParams& crystal,
                                      int j, const GridSpec& grid,
                                      const NormalizationConstants& consts,
                                      const QuadSpec& spec, unsigned threads) {
  const auto taus = grid.points();
  PhotonNumberCurve curve{grid, std::vector<double>(taus.size()), j};
  parallel_for(taus.size(), threads, [&](std::size_t i) {
    curve.values[i] = mean_photon_number(field, crystal, j, taus[i], consts, spec);
  });
  return curve;
}

double spectrum_direct(const PumpField& field, const CrystalParams& crystal, int j, double nu,
                       const NormalizationConstants& consts, const QuadSpec& spec) {
  require_field(j);
  consts.validate();
  if (field.is_zero()) return 0.0;
  const int i = crystal.internal_field(j);
  const Mismatch m = crystal.mismatch();
  const double dq = m.dp(3 - i);
  const double L = crystal.length();
  const double offset = spectral_sign(i) * m.d * nu;

  const double nu_ref = 1.0 / field.time_scale();
  const double p_ref = field.spectral_intensity_bound();
  const Interval support = field.frequency_support(spec.truncation_eps);
  const double a = support.lo / nu_ref;
  const double b = support.hi / nu_ref;

  // Split at the phase-matching centre, at the half-periods of the pump
  // interference fringes and at those of the sinc^2 oscillation.
  std::vector<double> extra;
  if (dq != 0.0) extra.push_back(offset / dq / nu_ref);
  std::vector<std::vector<double>> splits;
  for (double delay : field.delay_differences()) {
    splits.push_back(oscillation_breakpoints(a, b, delay * nu_ref));
  }
  splits.push_back(oscillation_breakpoints(a, b, L * dq * nu_ref));
  std::vector<double> pts{a, b};
  for (const auto& s : splits) pts.insert(pts.end(), s.begin(), s.end());
  pts = merge_breakpoints(a, b, {std::span<const double>(pts), std::span<const double>(extra)});

  const auto integrand = [&](double x) {
    const double nu_p = x * nu_ref;
    const double s = sinc(0.5 * L * (dq * nu_p - offset));
    return spectral_intensity(field, nu_p) / p_ref * s * s;
  };
  const QuadResult r = integrate_1d(integrand, pts, spec);
  return consts.c_s * L * L * p_ref * nu_ref * r.value;
}

SpectrumCurve spectrum_curve(const PumpField& field, const CrystalParams& crystal, int j,
                             const GridSpec& grid, const NormalizationConstants& consts,
                             const QuadSpec& spec, unsigned threads) {
  const auto nus = grid.points();
  SpectrumCurve curve;
  curve.grid = grid;
  curve.values.resize(nus.size());
  curve.field = j;
  curve.provenance = SpectrumProvenance::kDirect;
  parallel_for(nus.size(), threads, [&](std::size_t k) {
    curve.values[k] = spectrum_direct(field, crystal, j, nus[k], consts, spec);
  });
  return curve;
}

double cross_kernel_p(double x, double y, double nu, const QuadSpec& spec) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("cross_kernel_p requires x > 0");
  if (y == 0.0) {
    throw DegenerateGeometryError("cross_kernel_p: y = 0 makes the 1/(pi y) prefactor diverge");
  }
  if (std::abs(y) > 1.0) {
    throw DomainError("cross_kernel_p requires |y| <= 1; swap the field labels");
  }
  const auto weight = [y](double s) { return y == 1.0 ? 1.0 : (1.0 - s) / (1.0 - y * s); };
  const auto pts = oscillation_breakpoints(0.0, 1.0, nu * x);
  const QuadResult r =
      integrate_1d([&](double s) { return weight(s) * std::cos(nu * x * s); }, pts, spec);
  return x / (kPi * y) * r.value;
}

namespace {

// Fourier transform G(u) = int S(v) exp(i u v) dv of the piecewise-linear
// interpolant of a uniformly sampled curve, zero outside the grid.
class LinearSplineTransform {
 public:
  explicit LinearSplineTransform(const SpectrumCurve& curve)
      : lo_(curve.grid.lo), h_(curve.grid.step()) {
    const auto& v = curve.values;
    means_.reserve(v.size() - 1);
    slopes_.reserve(v.size() - 1);
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      means_.push_back(0.5 * (v[k] + v[k + 1]));
      slopes_.push_back((v[k + 1] - v[k]) / h_);
    }
  }

  cdouble operator()(double u) const {
    const double eta = 0.5 * h_;
    const double z = u * eta;
    double sinc_term;
    double odd_term;  // (sin z - z cos z) / z^2
    if (std::abs(z) < 1e-3) {
      const double z2 = z * z;
      sinc_term = 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
      odd_term = z / 3.0 - z * z2 / 30.0 + z * z2 * z2 / 840.0;
    } else {
      sinc_term = std::sin(z) / z;
      odd_term = (std::sin(z) - z * std::cos(z)) / (z * z);
    }
    cdouble even_sum{};
    cdouble odd_sum{};
    for (std::size_t k = 0; k < means_.size(); ++k) {
      const double centre = lo_ + (static_cast<double>(k) + 0.5) * h_;
      const cdouble phase = std::polar(1.0, u * centre);
      even_sum += means_[k] * phase;
      odd_sum += slopes_[k] * phase;
    }
    return 2.0 * eta * sinc_term * even_sum + cdouble(0.0, 2.0 * eta * eta * odd_term) * odd_sum;
  }

 private:
  double lo_;
  double h_;
  std::vector<double> means_;
  std::vector<double> slopes_;
};

constexpr std::array<double, 11> kNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kKronrod = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525420338, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kGauss = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct PanelRule {
  std::vector<double> nodes;
  std::vector<double> kronrod;
  std::vector<double> gauss;  // zero on Kronrod-only nodes
};

PanelRule composite_rule(double a, double b, std::size_t panels) {
  PanelRule rule;
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double centre = a + (static_cast<double>(p) + 0.5) * width;
    const double half = 0.5 * width;
    const auto push = [&](double node, std::size_t idx) {
      rule.nodes.push_back(centre + half * node);
      rule.kronrod.push_back(half * kKronrod[idx]);
      rule.gauss.push_back(idx % 2 == 1 && idx < 10 ? half * kGauss[idx / 2] : 0.0);
    };
    for (std::size_t idx = 0; idx < 10; ++idx) {
      push(-kNodes[idx], idx);
      push(kNodes[idx], idx);
    }
    push(0.0, 10);
  }
  return rule;
}

}  // namespace

SpectrumCurve spectrum_from_partner(const SpectrumCurve& partner, const CrystalParams& crystal,
                                    const NormalizationConstants& consts,
                                    const GridSpec& target_grid, const QuadSpec& spec) {
  partner.validate();
  target_grid.validate();
  require_field(partner.field);
  consts.validate();
  const int target = 3 - partner.field;
  const int i = crystal.internal_field(target);
  const Mismatch m = crystal.mismatch();
  if (m.d == 0.0) throw DegenerateGeometryError("spectrum_from_partner needs D != 0");
  const double dp_target = m.dp(i);
  const double dp_partner = m.dp(3 - i);
  if (dp_target == 0.0) {
    throw DegenerateGeometryError("spectrum_from_partner: D_p of the target field is zero");
  }
  const double r = dp_partner / dp_target;
  if (r == 0.0) {
    throw DegenerateGeometryError(
        "spectrum_from_partner: kernel ratio y = 0 (partner D_p = 0) is degenerate");
  }
  if (std::abs(r) > 1.0) {
    throw DomainError("spectrum_from_partner: field " + std::to_string(target) +
                      " cannot be rebuilt from field " + std::to_string(partner.field) +
                      " because |D_p" + std::to_string(target) + "| < |D_p" +
                      std::to_string(partner.field) + "|; swap the field labels");
  }
  if (consts.c_s == 0.0) throw DomainError("spectrum_from_partner needs c_S > 0");

  // S_j(nu) = (1/pi) int_0^x ds w(s) Re{exp(i s nu) G(r s)},
  // w(s) = (x - s)/(x - |r| s), x = |D| L. This is the p-kernel convolution
  // with the order of the nu' and s integrations exchanged.
  const double x = std::abs(m.d) * crystal.length();
  const double abs_r = std::abs(r);
  const LinearSplineTransform transform(partner);
  const auto nus = target_grid.points();
  const double nu_max = std::max(std::abs(target_grid.lo), std::abs(target_grid.hi));
  const double partner_max = std::max(std::abs(partner.grid.lo), std::abs(partner.grid.hi));
  const double phase_span = x * (nu_max + abs_r * partner_max);
  std::size_t panels = std::max<std::size_t>(8, static_cast<std::size_t>(phase_span / kPi) + 8);

  SpectrumCurve out;
  out.grid = target_grid;
  out.field = target;
  out.provenance = SpectrumProvenance::kFromPartner;
  out.values.assign(nus.size(), 0.0);

  for (int attempt = 0; attempt < 5; ++attempt, panels *= 2) {
    const PanelRule rule = composite_rule(0.0, x, panels);
    std::vector<cdouble> g(rule.nodes.size());
    std::vector<double> w(rule.nodes.size());
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double s = rule.nodes[k];
      g[k] = transform(r * s);
      w[k] = abs_r == 1.0 ? 1.0 : (x - s) / (x - abs_r * s);
    }
    double worst = 0.0;
    double peak = 0.0;
    for (std::size_t n = 0; n < nus.size(); ++n) {
      double kron = 0.0;
      double gauss = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double f = w[k] * std::real(std::polar(1.0, rule.nodes[k] * nus[n]) * g[k]);
        kron += rule.kronrod[k] * f;
        gauss += rule.gauss[k] * f;
      }
      out.values[n] = std::max(0.0, kron / kPi);
      worst = std::max(worst, std::abs(kron - gauss) / kPi);
      peak = std::max(peak, std::abs(kron) / kPi);
    }
    if (worst <= std::max(spec.abs_tol, spec.rel_tol * peak)) break;
    if (attempt == 4) {
      out.warnings.push_back("partner reconstruction quadrature error " + std::to_string(worst) +
                             " exceeds tolerance");
    }
  }

  // Tail mass of the partner beyond its grid, assuming the 1/nu^2 decay of
  // the sinc^2 wings.
  const auto& pv = partner.values;
  double mass = 0.0;
  for (std::size_t k = 0; k + 1 < pv.size(); ++k) mass += 0.5 * (pv[k] + pv[k + 1]);
  mass *= partner.grid.step();
  const double tail = pv.front() * std::max(std::abs(partner.grid.lo), partner.grid.step()) +
                      pv.back() * std::max(std::abs(partner.grid.hi), partner.grid.step());
  if (mass > 0.0 && tail / mass > 1e-3) {
    out.warnings.push_back("partner spectrum support too narrow: estimated tail mass " +
                           std::to_string(tail / mass) + " of total");
  }
  return out;
}

SpectrumCurve spectrum_from_partner(const SpectrumCurve& partner, const CrystalParams& crystal,
                                    const NormalizationConstants& consts, const QuadSpec& spec) {
  return spectrum_from_partner(partner, crystal, consts, partner.grid, spec);
}

}  // namespace biphoton
