#pragma once

#include <complex>
#include <span>
#include <vector>

#include "biphoton/numerics.hpp"

namespace biphoton {

using cdouble = std::complex<double>;

/// One chirped Gaussian pulse xi * exp(-(1 + i a) t^2 / tau^2).
class PumpPulse {
 public:
  PumpPulse(double xi, double tau, double chirp = 0.0);

  double xi() const { return xi_; }
  double tau() const { return tau_; }
  double chirp() const { return chirp_; }

  /// (1 + i a) / tau^2, units s^-2.
  cdouble alpha() const { return cdouble(1.0, chirp_) / (tau_ * tau_); }

  cdouble envelope(double t) const;
  /// Closed-form spectrum with the exp(+i nu t) / (2 pi) convention.
  cdouble spectrum(double nu) const;

  /// Half-width in t beyond which |E|^2 < eps * xi^2.
  double time_half_width(double eps) const;
  /// Half-width in nu beyond which |E~|^2 < eps * |E~(0)|^2.
  double frequency_half_width(double eps) const;

 private:
  double xi_;
  double tau_;
  double chirp_;
};

/// Coherent superposition of pulses; each component enters as
/// exp(i phase) * E_k(t + delay).
class PumpField {
 public:
  struct Component {
    PumpPulse pulse;
    double delay = 0.0;
    double phase = 0.0;
  };

  /// E(t) = E_1(t) + exp(i phi) E_2(t + theta).
  PumpField(PumpPulse pulse1, PumpPulse pulse2, double theta, double phi);
  /// General N-pulse superposition.
  explicit PumpField(std::vector<Component> components);

  static PumpField single(PumpPulse pulse);

  const PumpPulse& pulse1() const { return components_.at(0).pulse; }
  const PumpPulse& pulse2() const { return components_.at(1).pulse; }
  double theta() const { return components_.size() > 1 ? components_[1].delay : 0.0; }
  double phi() const { return components_.size() > 1 ? components_[1].phase : 0.0; }
  bool is_two_pulse() const { return components_.size() == 2; }

  std::span<const Component> components() const { return components_; }

  PumpField with_theta(double theta) const;
  PumpField with_phi(double phi) const;

  /// True when every amplitude is zero.
  bool is_zero() const;

  /// Largest pulse duration among non-zero components (1 s for a zero pump).
  double time_scale() const;
  /// Upper bound on |E(t)|^2: (sum |xi|)^2.
  double intensity_bound() const;
  /// Upper bound on |E~(nu)|^2.
  double spectral_intensity_bound() const;

  /// Time intervals outside which every component's intensity falls below
  /// eps times its own peak.
  IntervalSet time_support(double eps) const;
  /// Symmetric frequency interval holding the spectral support.
  Interval frequency_support(double eps) const;

  /// Pairwise delay differences between non-zero components; these set the
  /// oscillation frequencies of the spectral intensity.
  std::vector<double> delay_differences() const;

 private:
  std::vector<Component> components_;
};

cdouble envelope_time(const PumpField& field, double t);
/// Sum of component spectra with delay phase exp(-i nu delay).
cdouble spectrum_amplitude(const PumpField& field, double nu);
double spectral_intensity(const PumpField& field, double nu);

}  // namespace biphoton
