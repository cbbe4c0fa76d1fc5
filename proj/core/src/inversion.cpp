#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <string>

#include "biphoton/one_photon.hpp"

namespace biphoton {

namespace {

// The FFTW planner is not thread-safe; plan creation and destruction share
// this lock while execution runs unlocked.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <class T>
struct FftwFree {
  void operator()(T* p) const { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree<T>>;

FftwBuffer<double> real_buffer(std::size_t n) {
  return FftwBuffer<double>(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
}

FftwBuffer<fftw_complex> complex_buffer(std::size_t n) {
  return FftwBuffer<fftw_complex>(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

// Real-to-complex and complex-to-real transforms of one fixed length.
class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n), half_(n / 2 + 1), real_(real_buffer(n)), spec_(complex_buffer(half_)) {
    std::lock_guard lock(planner_mutex());
    const int len = static_cast<int>(n);
    forward_ = fftw_plan_dft_r2c_1d(len, real_.get(), spec_.get(), FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(len, spec_.get(), real_.get(), FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::vector<std::complex<double>> forward(const std::vector<double>& x) {
    std::copy(x.begin(), x.end(), real_.get());
    fftw_execute(forward_);
    std::vector<std::complex<double>> out(half_);
    for (std::size_t k = 0; k < half_; ++k) out[k] = {spec_[k][0], spec_[k][1]};
    return out;
  }

  // Unnormalized inverse: returns n times the inverse DFT.
  std::vector<double> backward(const std::vector<std::complex<double>>& y) {
    for (std::size_t k = 0; k < half_; ++k) {
      spec_[k][0] = y[k].real();
      spec_[k][1] = y[k].imag();
    }
    fftw_execute(backward_);
    return std::vector<double>(real_.get(), real_.get() + n_);
  }

 private:
  std::size_t n_;
  std::size_t half_;
  FftwBuffer<double> real_;
  FftwBuffer<fftw_complex> spec_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

// Smallest 2^a 3^b 5^c not below n.
std::size_t smooth_size(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 2);; ++m) {
    std::size_t r = m;
    for (std::size_t f : {2, 3, 5}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return m;
  }
}

// Catmull-Rom interpolation between v[c] and v[c + 1]; one-sided at the ends.
double cubic_interpolate(const std::vector<double>& v, std::size_t c, double t) {
  if (t == 0.0) return v[c];
  const double p1 = v[c];
  const double p2 = v[c + 1];
  const double p0 = c > 0 ? v[c - 1] : 2.0 * p1 - p2;
  const double p3 = c + 2 < v.size() ? v[c + 2] : 2.0 * p2 - p1;
  return p1 + 0.5 * t *
                  (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                  t * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace

InversionResult invert_pump_spectrum(const SpectrumCurve& measured, const CrystalParams& crystal,
                                     const NormalizationConstants& consts,
                                     const InversionOptions& options) {
  measured.validate();
  if (measured.field != 1 && measured.field != 2) {
    throw DomainError("inversion input must be the spectrum of field 1 or 2");
  }
  if (!(options.lambda > 0.0) || !(options.residual_limit > 0.0) ||
      options.points_per_lobe < 2 || options.lobes_covered < 1) {
    throw DomainError("invalid inversion options");
  }
  consts.validate();
  if (consts.c_s == 0.0) throw DomainError("inversion needs c_S > 0");
  const int i = crystal.internal_field(measured.field);
  const Mismatch m = crystal.mismatch();
  const double dq = m.dp(3 - i);
  if (m.d == 0.0 || dq == 0.0) {
    throw DegenerateGeometryError("inversion needs D != 0 and D_p of the partner field != 0");
  }
  const double L = crystal.length();
  const double sign = i == 1 ? 1.0 : -1.0;
  const double scale = sign * m.d / dq;  // mu = scale * nu

  // Input on an increasing mu grid.
  std::vector<double> input = measured.values;
  if (scale < 0.0) std::reverse(input.begin(), input.end());
  const double mu_lo = std::min(scale * measured.grid.lo, scale * measured.grid.hi);
  const double mu_hi = std::max(scale * measured.grid.lo, scale * measured.grid.hi);
  const double coarse = (mu_hi - mu_lo) / static_cast<double>(input.size() - 1);

  const double lobe = 2.0 * kPi / (L * std::abs(dq));
  const auto refine = static_cast<std::size_t>(
      std::max(1.0, std::ceil(coarse / (lobe / options.points_per_lobe) - 1e-12)));
  const double h = coarse / static_cast<double>(refine);
  const std::size_t window = (input.size() - 1) * refine + 1;

  // The spectrum keeps the 1/mu^2 sinc^2 wings of the kernel beyond the
  // input window. Padding with zeros would put a step there, so the wings
  // are continued analytically over a padding several windows wide.
  const double needed = 2.0 * options.lobes_covered * lobe;
  const double span = static_cast<double>(window - 1) * h;
  const auto target = static_cast<std::size_t>(std::ceil(std::max(needed, 8.0 * span) / h)) + 1;
  const std::size_t n = smooth_size(std::max(target, window + 2));
  const std::size_t pad = (n - window) / 2;

  std::vector<double> s(n, 0.0);
  for (std::size_t k = 0; k < window; ++k) {
    const std::size_t c = std::min(k / refine, input.size() - 2);
    const double frac = static_cast<double>(k - c * refine) / static_cast<double>(refine);
    s[pad + k] = cubic_interpolate(input, c, frac);
  }
  double mass = 0.0;
  double moment = 0.0;
  for (std::size_t k = 0; k < window; ++k) {
    const double mu = mu_lo + static_cast<double>(k) * h;
    mass += s[pad + k];
    moment += s[pad + k] * mu;
  }
  const double centre = mass > 0.0 ? moment / mass : 0.5 * (mu_lo + mu_hi);
  const double left_gap = centre - mu_lo;
  const double right_gap = mu_hi - centre;
  for (std::size_t k = 0; k < n; ++k) {
    if (k >= pad && k < pad + window) continue;
    // Offsets wrap around the period, so each padded sample continues the
    // nearer window edge.
    const double after = static_cast<double>((k + n - (pad + window - 1)) % n) * h;
    const double before = static_cast<double>((pad + n - k) % n) * h;
    if (after <= before) {
      if (right_gap > 0.0) {
        const double r = right_gap / (right_gap + after);
        s[k] = s[pad + window - 1] * r * r;
      }
    } else if (left_gap > 0.0) {
      const double r = left_gap / (left_gap + before);
      s[k] = s[pad] * r * r;
    }
  }

  // Circular kernel with its periodic images folded in.
  std::vector<double> kernel(n);
  const double period = static_cast<double>(n) * h;
  for (std::size_t k = 0; k < n; ++k) {
    const double off = k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - n;
    double sum = 0.0;
    for (int img = -4; img <= 4; ++img) {
      const double u = off * h + img * period;
      const double v = sinc(0.5 * L * dq * u);
      sum += v * v;
    }
    kernel[k] = consts.c_s * L * L * h * sum;
  }

  RealFft fft(n);
  const auto s_hat = fft.forward(s);
  const auto k_hat = fft.forward(kernel);
  double k_max = 0.0;
  for (const auto& v : k_hat) k_max = std::max(k_max, std::norm(v));
  const double reg = options.lambda * k_max;

  std::vector<std::complex<double>> p_hat(k_hat.size());
  for (std::size_t k = 0; k < k_hat.size(); ++k) {
    p_hat[k] = s_hat[k] * std::conj(k_hat[k]) / (std::norm(k_hat[k]) + reg);
  }
  std::vector<double> p = fft.backward(p_hat);
  for (double& v : p) v /= static_cast<double>(n);

  InversionResult result;
  const double peak = *std::max_element(p.begin(), p.end());
  std::size_t large_negatives = 0;
  for (double& v : p) {
    if (v < 0.0) {
      if (v < -options.clamp_fraction * peak) ++large_negatives;
      v = 0.0;
    }
  }
  if (large_negatives > 0) {
    result.warnings.push_back(std::to_string(large_negatives) +
                              " recovered samples were negative beyond the clamp threshold");
  }

  const auto fwd_hat = fft.forward(p);
  std::vector<std::complex<double>> prod(fwd_hat.size());
  for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = fwd_hat[k] * k_hat[k];
  std::vector<double> forward = fft.backward(prod);
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t k = pad; k < pad + window; ++k) {
    const double f = forward[k] / static_cast<double>(n);
    diff += (f - s[k]) * (f - s[k]);
    norm += s[k] * s[k];
  }
  result.residual = norm > 0.0 ? std::sqrt(diff / norm) : 0.0;

  result.pump.grid = GridSpec{mu_lo, mu_hi, window};
  result.pump.values.assign(p.begin() + static_cast<std::ptrdiff_t>(pad),
                            p.begin() + static_cast<std::ptrdiff_t>(pad + window));
  result.pump.field = 0;
  result.pump.provenance = SpectrumProvenance::kInvertedInput;
  result.pump.warnings = result.warnings;

  if (result.residual > options.residual_limit) {
    throw IllPosedInversionError("pump inversion residual " + std::to_string(result.residual) +
                                     " exceeds limit " + std::to_string(options.residual_limit),
                                 result);
  }
  return result;
}

}  // namespace biphoton
