#pragma once

// One-photon observables: time-resolved mean photon number, down-converted
// spectra, the spectrum-to-spectrum kernel and the recovery of the pump
// spectral intensity from a measured spectrum.

#include <string>
#include <vector>

#include "biphoton/error.hpp"
#include "biphoton/model.hpp"
#include "biphoton/numerics.hpp"
#include "biphoton/pump.hpp"

namespace biphoton {

enum class SpectrumProvenance { kDirect, kFromPartner, kInvertedInput };

/// Sampled spectrum on a uniform angular-frequency grid (rad/s).
///
/// `field` is 1 or 2 for a down-converted spectrum and 0 for a pump
/// spectral intensity.
struct SpectrumCurve {
  GridSpec grid;
  std::vector<double> values;
  SpectrumProvenance provenance = SpectrumProvenance::kDirect;
  int field = 1;
  std::vector<std::string> warnings;

  void validate() const;
  /// Linear interpolation with zero extension outside the grid.
  double interpolate(double nu) const;
};

/// Sampled N_j(tau) on a uniform time grid (s).
struct PhotonNumberCurve {
  GridSpec grid;
  std::vector<double> values;
  int field = 1;
};

/// N_j(tau) = (2 pi)^2 c_N / |D| * int_{-L}^{0} dz |E_p(tau - D_pj z)|^2.
///
/// The z integral is evaluated as the mean pump intensity over
/// [tau, tau + D_pj L]; for D_pj = 0 it is exactly L |E_p(tau)|^2.
double mean_photon_number(const PumpField& field, const CrystalParams& crystal, int j,
                          double tau, const NormalizationConstants& consts,
                          const QuadSpec& spec = {});

PhotonNumberCurve photon_number_curve(const PumpField& field, const CrystalParams& crystal,
                                      int j, const GridSpec& grid,
                                      const NormalizationConstants& consts,
                                      const QuadSpec& spec = {}, unsigned threads = 1);

/// Spectrum of field j: the pump spectral intensity convolved with the
/// phase-matching function L^2 sinc^2.
double spectrum_direct(const PumpField& field, const CrystalParams& crystal, int j, double nu,
                       const NormalizationConstants& consts, const QuadSpec& spec = {});

SpectrumCurve spectrum_curve(const PumpField& field, const CrystalParams& crystal, int j,
                             const GridSpec& grid, const NormalizationConstants& consts,
                             const QuadSpec& spec = {}, unsigned threads = 1);

/// p_{x,y}(nu) = 1/(pi y) int_0^x dt (x - t)/(x - y t) cos(nu t).
///
/// Requires x > 0 and 0 < |y| <= 1. y = 0 throws DegenerateGeometryError;
/// |y| > 1 throws DomainError (swap the field labels instead).
double cross_kernel_p(double x, double y, double nu, const QuadSpec& spec = {});

/// Rebuilds the spectrum of the other field from `partner`.
///
/// With target field j and r = D_{p,3-j} / D_{pj}, the target spectrum is
///   S_j(nu) = int dw p_{|D|L,|r|}(nu - w) S_{3-j}(-w / r)
/// and is only determined by the partner when |r| <= 1. The partner curve is
/// interpolated linearly with zero extension; a warning is attached when its
/// estimated tail mass beyond the grid exceeds 1e-3.
SpectrumCurve spectrum_from_partner(const SpectrumCurve& partner, const CrystalParams& crystal,
                                    const NormalizationConstants& consts,
                                    const GridSpec& target_grid, const QuadSpec& spec = {});

/// Same, evaluated on the partner's own grid.
SpectrumCurve spectrum_from_partner(const SpectrumCurve& partner, const CrystalParams& crystal,
                                    const NormalizationConstants& consts,
                                    const QuadSpec& spec = {});

struct InversionOptions {
  double lambda = 1e-6;            ///< Tikhonov weight relative to max |K^|^2
  double residual_limit = 0.05;    ///< above this the inversion is rejected
  double clamp_fraction = 1e-6;    ///< negatives above -clamp * peak become 0
  int lobes_covered = 40;          ///< half-width of the working grid, in sinc^2 lobes
  int points_per_lobe = 8;
};

struct InversionResult {
  SpectrumCurve pump;       ///< recovered |E_p(nu_p)|^2, field = 0
  double residual = 0.0;    ///< ||K * P - S|| / ||S|| on the input window
  std::vector<std::string> warnings;
};

class IllPosedInversionError : public NumericalError {
 public:
  IllPosedInversionError(const std::string& what, InversionResult best)
      : NumericalError(what), best_(std::move(best)) {}
  const InversionResult& best_estimate() const { return best_; }

 private:
  InversionResult best_;
};

/// Recovers the pump spectral intensity from the spectrum of field
/// `measured.field` by regularized Fourier division.
///
/// Writing mu = s D nu / D_{p,3-j} turns the spectrum into the convolution
/// c_S (P * K)(mu) with K(u) = L^2 sinc^2(L D_{p,3-j} u / 2). The returned
/// curve lives on the mu (= nu_p) grid. Throws IllPosedInversionError when the
/// forward residual exceeds options.residual_limit.
InversionResult invert_pump_spectrum(const SpectrumCurve& measured, const CrystalParams& crystal,
                                     const NormalizationConstants& consts,
                                     const InversionOptions& options = {});

}  // namespace biphoton
