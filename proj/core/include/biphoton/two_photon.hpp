#pragma once

// Two-photon observables of the polarization Hong-Ou-Mandel interferometer:
// the two-photon amplitude, the interference term rho, the coincidence
// probability R0, the normalized coincidence rate R_n = 1 - rho and the
// visibility of the resulting dip.

#include <functional>
#include <string>
#include <vector>

#include "biphoton/error.hpp"
#include "biphoton/model.hpp"
#include "biphoton/numerics.hpp"
#include "biphoton/pump.hpp"

namespace biphoton {

/// A_12(T0, tau) = C_A / |D| rect(tau / (D L)) E_p((Lambda / D) tau + T0)
/// times the global phase exp(-2 i omega0_1 T0).
cdouble two_photon_amplitude(const PumpField& field, const CrystalParams& crystal, double t0,
                             double tau, const NormalizationConstants& consts);

/// Half-length of the tau window contributing at delay tau_l:
/// D L / 2 - |tau_l - D L / 2|, or 0 when the window is empty.
double overlap_half_width(const CrystalParams& crystal, double tau_l);

/// R0 = |C_A|^2 / (2 D^2) int_0^{DL} dtau int dT0 |E_p|^2 for any pump.
double R0_general(const PumpField& field, const CrystalParams& crystal,
                  const NormalizationConstants& consts, const QuadSpec& spec = {});

/// rho(tau_l) by nested quadrature over (tau, T0), normalized by the
/// configuration's own R0. Exactly 0 when tau_l lies outside [0, D L].
/// Throws DomainError when R0 vanishes (rho is then undefined).
double rho_general(const PumpField& field, const CrystalParams& crystal, double tau_l,
                   const NormalizationConstants& consts, const QuadSpec& spec = {});

struct RhoParts {
  double rho1 = 0.0;  ///< same-pulse terms
  double rho2 = 0.0;  ///< cross term, carries theta and phi
  double total() const { return rho1 + rho2; }
};

struct R0Parts {
  double r01 = 0.0;  ///< independent of theta
  double r02 = 0.0;  ///< overlap term
  double total() const { return r01 + r02; }
};

/// Two-pulse decomposition evaluated by generic nested quadrature.
RhoParts rho_two_pulse(const PumpField& field, const CrystalParams& crystal, double tau_l,
                       const NormalizationConstants& consts, const QuadSpec& spec = {});
R0Parts R0_two_pulse(const PumpField& field, const CrystalParams& crystal,
                     const NormalizationConstants& consts, const QuadSpec& spec = {});

/// Closed forms for Gaussian pulses: the T0 integral is done analytically
/// and only the tau integral remains.
RhoParts rho_gaussian(const PumpField& field, const CrystalParams& crystal, double tau_l,
                      const NormalizationConstants& consts, const QuadSpec& spec = {});
R0Parts R0_gaussian(const PumpField& field, const CrystalParams& crystal,
                    const NormalizationConstants& consts);

enum class HomMethod { kGaussianClosedForm, kGenericQuadrature };

const char* to_string(HomMethod method);

struct Interferogram {
  std::vector<double> tau_l;      ///< s
  std::vector<double> length_mm;  ///< delay-line length for each tau_l
  std::vector<double> r_n;
  std::vector<double> rho1;
  std::vector<double> rho2;
  R0Parts r0;
  double dip_width = 0.0;  ///< D L
  HomMethod method = HomMethod::kGaussianClosedForm;
};

/// Evaluates rho and R_n for one configuration with a fixed method. R0 is
/// computed once at construction.
class HomModel {
 public:
  HomModel(PumpField field, CrystalParams crystal, NormalizationConstants consts,
           HomMethod method = HomMethod::kGaussianClosedForm, QuadSpec spec = {});

  RhoParts rho(double tau_l) const;
  double r_n(double tau_l) const { return 1.0 - rho(tau_l).total(); }
  const R0Parts& r0() const { return r0_; }
  const PumpField& field() const { return field_; }
  const CrystalParams& crystal() const { return crystal_; }
  HomMethod method() const { return method_; }

 private:
  PumpField field_;
  CrystalParams crystal_;
  NormalizationConstants consts_;
  HomMethod method_;
  QuadSpec spec_;
  R0Parts r0_;
};

Interferogram interferogram(const HomModel& model, const DelayLine& delay,
                            std::span<const double> tau_l, unsigned threads = 1);
Interferogram interferogram(const HomModel& model, const DelayLine& delay,
                            const GridSpec& tau_l_grid, unsigned threads = 1);
/// Same, sampled on a grid of delay-line lengths (mm).
Interferogram interferogram_over_length(const HomModel& model, const DelayLine& delay,
                                        const GridSpec& length_grid, unsigned threads = 1);

/// Default tau_l grid covering [-0.1 D L, 1.1 D L].
GridSpec default_tau_l_grid(const CrystalParams& crystal, std::size_t n = 241);

struct VisibilityResult {
  double v = 0.0;
  double location = 0.0;  ///< tau_l of R_n,min
  double r_min = 0.0;
  double r_max = 1.0;
  bool max_from_scan = false;  ///< false when R_n,max is the baseline 1
};

/// V = (R_max - R_min) / (R_max + R_min) from a sampled interferogram.
///
/// R_max is the baseline 1 unless a sample exceeds 1, then the largest
/// value. R_min is the smallest sample; when `r_n` is given both extrema are
/// refined by golden-section search on the neighbouring cells. The scan must
/// cover [-0.1 D L, 1.1 D L]. A flat curve throws UndefinedVisibilityError.
VisibilityResult visibility(const Interferogram& ig, const Integrand& r_n = {});

/// Visibility of one configuration on the default grid, extrema refined.
VisibilityResult visibility(const HomModel& model, std::size_t n = 241);

struct VisibilityScan {
  std::vector<double> x;  ///< theta, phi or tau0
  std::vector<double> v;
  bool has_interior_max = false;
  double arg_max = 0.0;
  double max_value = 0.0;
};

struct ScanOptions {
  std::size_t tau_l_points = 241;
  unsigned threads = 1;
  HomMethod method = HomMethod::kGaussianClosedForm;
  QuadSpec spec = {};
};

/// V over a theta grid for the two-pulse template, plus the refined
/// position of the largest interior value.
VisibilityScan visibility_vs_theta(const PumpField& tmpl, const CrystalParams& crystal,
                                   const GridSpec& thetas, const NormalizationConstants& consts,
                                   const ScanOptions& options = {});

/// V over a grid of relative phases phi.
VisibilityScan visibility_vs_phi(const PumpField& tmpl, const CrystalParams& crystal,
                                 const GridSpec& phis, const NormalizationConstants& consts,
                                 const ScanOptions& options = {});

struct ThetaMaxPoint {
  double tau0 = 0.0;
  double theta_max = 0.0;
  double v_max = 0.0;
};

/// For each tau0 builds two identical in-phase pulses (xi = 1, duration
/// tau0, the given chirp) and records the theta of maximal visibility.
std::vector<ThetaMaxPoint> theta_max_vs_tau0(std::span<const double> tau0s, double chirp,
                                             const CrystalParams& crystal,
                                             const GridSpec& thetas,
                                             const NormalizationConstants& consts,
                                             const ScanOptions& options = {});

struct R0ScanPoint {
  double theta = 0.0;
  R0Parts r0;
};

std::vector<R0ScanPoint> r0_vs_theta(const PumpField& tmpl, const CrystalParams& crystal,
                                     const GridSpec& thetas, const NormalizationConstants& consts);

}  // namespace biphoton
