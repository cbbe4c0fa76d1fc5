#include "biphoton/pump.hpp"

#include <cmath>
#include <string>

#include "biphoton/error.hpp"
#include "biphoton/model.hpp"

namespace biphoton {

PumpPulse::PumpPulse(double xi, double tau, double chirp) : xi_(xi), tau_(tau), chirp_(chirp) {
  if (!std::isfinite(xi) || xi < 0.0) {
    throw DomainError("pulse amplitude xi must be finite and >= 0, got " + std::to_string(xi));
  }
  if (!std::isfinite(tau) || tau <= 0.0) {
    throw DomainError("pulse duration tau must be finite and > 0, got " + std::to_string(tau));
  }
  if (!std::isfinite(chirp)) throw DomainError("chirp parameter must be finite");
}

cdouble PumpPulse::envelope(double t) const {
  if (xi_ == 0.0) return {};
  const double x = t / tau_;
  const double x2 = x * x;
  // exp(-(1 + i a) x^2) = exp(-x^2) * (cos(a x^2) - i sin(a x^2))
  return xi_ * std::exp(-x2) * cdouble(std::cos(chirp_ * x2), -std::sin(chirp_ * x2));
}

cdouble PumpPulse::spectrum(double nu) const {
  if (xi_ == 0.0) return {};
  const cdouble one_ia(1.0, chirp_);
  const double z = tau_ * nu;
  return xi_ * tau_ / (2.0 * std::sqrt(kPi) * std::sqrt(one_ia)) *
         std::exp(-z * z / (4.0 * one_ia));
}

double PumpPulse::time_half_width(double eps) const {
  return tau_ * std::sqrt(0.5 * std::log(1.0 / eps));
}

double PumpPulse::frequency_half_width(double eps) const {
  return std::sqrt(2.0 * (1.0 + chirp_ * chirp_) * std::log(1.0 / eps)) / tau_;
}

PumpField::PumpField(PumpPulse pulse1, PumpPulse pulse2, double theta, double phi)
    : PumpField(std::vector<Component>{{pulse1, 0.0, 0.0}, {pulse2, theta, phi}}) {}

PumpField::PumpField(std::vector<Component> components) : components_(std::move(components)) {
  if (components_.empty()) throw DomainError("pump field needs at least one pulse");
  for (const auto& c : components_) {
    if (!std::isfinite(c.delay) || !std::isfinite(c.phase)) {
      throw DomainError("pulse delay and phase must be finite");
    }
  }
}

PumpField PumpField::single(PumpPulse pulse) {
  return PumpField(std::vector<Component>{{pulse, 0.0, 0.0}});
}

PumpField PumpField::with_theta(double theta) const {
  PumpField copy = *this;
  if (copy.components_.size() < 2) throw DomainError("with_theta needs a two-pulse pump");
  copy.components_[1].delay = theta;
  return copy;
}

PumpField PumpField::with_phi(double phi) const {
  PumpField copy = *this;
  if (copy.components_.size() < 2) throw DomainError("with_phi needs a two-pulse pump");
  copy.components_[1].phase = phi;
  return copy;
}

bool PumpField::is_zero() const {
  for (const auto& c : components_) {
    if (c.pulse.xi() != 0.0) return false;
  }
  return true;
}

double PumpField::time_scale() const {
  double scale = 0.0;
  for (const auto& c : components_) {
    if (c.pulse.xi() != 0.0) scale = std::max(scale, c.pulse.tau());
  }
  return scale > 0.0 ? scale : 1.0;
}

double PumpField::intensity_bound() const {
  double sum = 0.0;
  for (const auto& c : components_) sum += c.pulse.xi();
  return sum * sum;
}

double PumpField::spectral_intensity_bound() const {
  double sum = 0.0;
  for (const auto& c : components_) {
    sum += c.pulse.xi() * c.pulse.tau() / (2.0 * std::sqrt(kPi));
  }
  return sum * sum;
}

IntervalSet PumpField::time_support(double eps) const {
  IntervalSet set;
  for (const auto& c : components_) {
    if (c.pulse.xi() == 0.0) continue;
    const double w = c.pulse.time_half_width(eps);
    set.add({-c.delay - w, -c.delay + w});
  }
  return set;
}

Interval PumpField::frequency_support(double eps) const {
  double w = 0.0;
  for (const auto& c : components_) {
    if (c.pulse.xi() != 0.0) w = std::max(w, c.pulse.frequency_half_width(eps));
  }
  return {-w, w};
}

std::vector<double> PumpField::delay_differences() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    for (std::size_t k = i + 1; k < components_.size(); ++k) {
      if (components_[i].pulse.xi() == 0.0 || components_[k].pulse.xi() == 0.0) continue;
      const double diff = std::abs(components_[i].delay - components_[k].delay);
      if (diff > 0.0) out.push_back(diff);
    }
  }
  return out;
}

cdouble envelope_time(const PumpField& field, double t) {
  cdouble sum{};
  for (const auto& c : field.components()) {
    const cdouble e = c.pulse.envelope(t + c.delay);
    sum += c.phase == 0.0 ? e : std::polar(1.0, c.phase) * e;
  }
  return sum;
}

cdouble spectrum_amplitude(const PumpField& field, double nu) {
  // E_k(t + delay) transforms to exp(-i nu delay) E~_k(nu) under the
  // (1/2 pi) int dt exp(+i nu t) convention.
  cdouble sum{};
  for (const auto& c : field.components()) {
    sum += std::polar(1.0, c.phase - nu * c.delay) * c.pulse.spectrum(nu);
  }
  return sum;
}

double spectral_intensity(const PumpField& field, double nu) {
  return std::norm(spectrum_amplitude(field, nu));
}

}  // namespace biphoton
