#pragma once

// Physical parameter types shared by all observables.
//
// Units: seconds for times, millimetres for lengths, rad/s for angular
// frequencies. Inverse group velocities are therefore in s/mm.

#include <cmath>

namespace biphoton {

/// Axis scale used when writing times (10^-13 s) to CSV.
inline constexpr double kTimeAxisUnit = 1e-13;
/// Axis scale used when writing angular frequencies (10^13 rad/s) to CSV.
inline constexpr double kFrequencyAxisUnit = 1e13;

inline constexpr double kPi = 3.14159265358979323846;

/// Group-velocity mismatch parameters derived from a crystal, all in s/mm.
struct Mismatch {
  double dp1 = 0.0;     ///< 1/v_p - 1/v_1
  double dp2 = 0.0;     ///< 1/v_p - 1/v_2
  double lambda = 0.0;  ///< 1/v_p - (1/v_1 + 1/v_2)/2
  double d = 0.0;       ///< 1/v_1 - 1/v_2

  double dp(int field) const { return field == 1 ? dp1 : dp2; }

  /// dp2 / dp1. Throws DegenerateGeometryError when dp1 == 0.
  double ratio() const;
};

/// Nonlinear crystal of length L with the inverse group velocities of the
/// pump and the two down-converted fields.
///
/// The two-photon formulas assume D = 1/v_1 - 1/v_2 > 0. A crystal built
/// with D < 0 swaps fields 1 and 2 internally; relabeled() reports this and
/// internal_field() maps a caller's field index onto the stored labels.
class CrystalParams {
 public:
  CrystalParams(double length_mm, double inv_vp, double inv_v1, double inv_v2,
                double omega0_1 = 0.0, double omega0_2 = 0.0);

  double length() const { return length_; }
  double inv_vp() const { return inv_vp_; }
  /// Stored (possibly relabeled) inverse group velocity of field 1.
  double inv_v1() const { return inv_v1_; }
  double inv_v2() const { return inv_v2_; }
  double omega0_1() const { return omega0_1_; }
  double omega0_2() const { return omega0_2_; }

  bool relabeled() const { return relabeled_; }
  /// Maps a caller field index (1 or 2) to the stored labeling.
  int internal_field(int field) const;

  /// Mismatch parameters in the stored labeling (D >= 0).
  Mismatch mismatch() const;

  /// D * L, the width of the coincidence dip in seconds.
  double dip_width() const { return (inv_v1_ - inv_v2_) * length_; }

 private:
  double length_;
  double inv_vp_;
  double inv_v1_;
  double inv_v2_;
  double omega0_1_;
  double omega0_2_;
  bool relabeled_ = false;
};

/// Mismatch parameters computed from raw velocities with no relabeling.
Mismatch derived_mismatch(double inv_vp, double inv_v1, double inv_v2);
Mismatch derived_mismatch(const CrystalParams& crystal);

/// Birefringent delay line; maps its length l to the relative delay tau_l.
class DelayLine {
 public:
  DelayLine(double inv_g1, double inv_g2);

  double inv_g1() const { return inv_g1_; }
  double inv_g2() const { return inv_g2_; }

  /// Seconds of relative delay per millimetre of material.
  double delay_per_mm() const { return inv_g2_ - inv_g1_; }
  double length_for_delay(double tau_l) const { return tau_l / delay_per_mm(); }

 private:
  double inv_g1_;
  double inv_g2_;
};

double tau_l_of_length(const DelayLine& delay, double length_mm);

/// User-set scale factors absorbing the physical prefactors C_N, C_S, C_A.
struct NormalizationConstants {
  double c_n = 1.0;     ///< mean photon number scale
  double c_s = 1.0;     ///< spectrum scale
  double c_a_sq = 10.0; ///< |C_A|^2

  void validate() const;
};

/// 1 on the open interval (0, 1), 0 elsewhere.
constexpr double rect(double x) { return (x > 0.0 && x < 1.0) ? 1.0 : 0.0; }

/// sin(x)/x with the removable singularity filled by its Taylor series.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace biphoton
