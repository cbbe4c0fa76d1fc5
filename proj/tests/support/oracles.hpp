#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's quadrature, pump or observable code: the formulas are written
// out directly and integrated with fixed composite rules.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

// BBO type-II constants at 413/826 nm and quartz for the delay line (s/mm).
inline constexpr double kInvVp = 56.85e-13;
inline constexpr double kInvV1 = 56.14e-13;
inline constexpr double kInvV2 = 54.30e-13;
inline constexpr double kInvG1 = 51.25e-13;
inline constexpr double kInvG2 = 51.59e-13;
// Pump inverse velocity that flips the sign of Lambda; makes |D_p1| > |D_p2|.
inline constexpr double kInvVpMirrored = kInvV1 + kInvV2 - kInvVp;

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  if (n % 2 == 1) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) s += f(a + static_cast<double>(i) * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// One chirped Gaussian pulse written out from its definition.
struct Pulse {
  double xi = 1.0;
  double tau = 1e-13;
  double a = 0.0;
};

inline cd pulse_time(const Pulse& p, double t) {
  return p.xi * std::exp(-cd(1.0, p.a) * t * t / (p.tau * p.tau));
}

/// exp(i nu t)/(2 pi) transform of pulse_time, derived by completing the
/// square: xi tau / (2 sqrt(pi) sqrt(1 + i a)) exp(-tau^2 nu^2 / (4 (1 + i a))).
inline cd pulse_spectrum(const Pulse& p, double nu) {
  const cd c(1.0, p.a);
  return p.xi * p.tau / (2.0 * std::sqrt(pi) * std::sqrt(c)) *
         std::exp(-p.tau * p.tau * nu * nu / (4.0 * c));
}

/// E(t) = E1(t) + exp(i phi) E2(t + theta).
struct TwoPulse {
  Pulse p1;
  Pulse p2{0.0, 1e-13, 0.0};
  double theta = 0.0;
  double phi = 0.0;

  cd time(double t) const {
    return pulse_time(p1, t) + std::polar(1.0, phi) * pulse_time(p2, t + theta);
  }
  double intensity(double t) const { return std::norm(time(t)); }
  cd spectrum(double nu) const {
    return pulse_spectrum(p1, nu) + std::polar(1.0, phi - nu * theta) * pulse_spectrum(p2, nu);
  }
  double spectral_intensity(double nu) const { return std::norm(spectrum(nu)); }
};

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

/// int E_p(t) conj(E_q(t + shift)) dt for two chirped Gaussians, from the
/// complex Gaussian integral.
inline cd gaussian_overlap(const Pulse& p, const Pulse& q, double shift) {
  const cd ap = cd(1.0, p.a) / (p.tau * p.tau);
  const cd aq = cd(1.0, -q.a) / (q.tau * q.tau);
  const cd s = ap + aq;
  return p.xi * q.xi * std::sqrt(pi / s) * std::exp(-ap * aq * shift * shift / s);
}

/// int |E|^2 dt.
inline double pump_energy(const TwoPulse& f) {
  const cd cross = std::polar(1.0, -f.phi) * gaussian_overlap(f.p1, f.p2, f.theta);
  return std::real(gaussian_overlap(f.p1, f.p1, 0.0) + gaussian_overlap(f.p2, f.p2, 0.0) +
                   2.0 * cross);
}

/// int dT E(T + k tau) conj(E(T - k tau)), split into the same-pulse part
/// and the cross part. Pulse 2 sits at delay theta with phase phi.
struct Correlation {
  double same = 0.0;
  double cross = 0.0;
};

inline Correlation correlation(const TwoPulse& f, double k, double tau) {
  const double delay[2] = {0.0, f.theta};
  const double phase[2] = {0.0, f.phi};
  const Pulse* pulse[2] = {&f.p1, &f.p2};
  Correlation out;
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) {
      const double shift = delay[q] - delay[p] - 2.0 * k * tau;
      const double v = std::real(std::polar(1.0, phase[p] - phase[q]) *
                                 gaussian_overlap(*pulse[p], *pulse[q], shift));
      (p == q ? out.same : out.cross) += v;
    }
  }
  return out;
}

/// HOM interference term: rho = 1/(D L E) int_{-h}^{h} dtau C(tau) with
/// h = D L / 2 - |tau_l - D L / 2| and E the pump energy. Simpson in tau.
struct Rho {
  double same = 0.0;
  double cross = 0.0;
  double total() const { return same + cross; }
};

inline Rho rho(const TwoPulse& f, double lambda, double d, double length, double tau_l,
               std::size_t panels = 4000) {
  const double dl = d * length;
  const double h = dl / 2.0 - std::abs(tau_l - dl / 2.0);
  if (!(h > 0.0)) return {};
  const double k = lambda / d;
  const double norm = dl * pump_energy(f);
  Rho out;
  out.same = simpson([&](double t) { return correlation(f, k, t).same; }, -h, h, panels) / norm;
  out.cross = simpson([&](double t) { return correlation(f, k, t).cross; }, -h, h, panels) / norm;
  return out;
}

/// R0 = |C_A|^2 L / (2 D) int |E|^2 dt.
inline double r0(const TwoPulse& f, double c_a_sq, double d, double length) {
  return c_a_sq * length / (2.0 * d) * pump_energy(f);
}

inline double relative_l2(const std::vector<double>& got, const std::vector<double>& want) {
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    diff += (got[i] - want[i]) * (got[i] - want[i]);
    norm += want[i] * want[i];
  }
  return std::sqrt(diff / norm);
}

/// Counts strict interior local maxima of sampled data.
inline int count_local_maxima(const std::vector<double>& y) {
  int n = 0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] > y[i + 1]) ++n;
  }
  return n;
}

inline int count_local_minima(const std::vector<double>& y) {
  int n = 0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] < y[i - 1] && y[i] < y[i + 1]) ++n;
  }
  return n;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

/// Seeded generator so property tests are reproducible.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace oracle
