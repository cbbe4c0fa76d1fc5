#include "biphoton/model.hpp"

#include <string>
#include <utility>

#include "biphoton/error.hpp"

namespace biphoton {

namespace {

void require_positive_finite(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw DomainError(std::string(name) + " must be finite and positive, got " +
                      std::to_string(value));
  }
}

}  // namespace

double Mismatch::ratio() const {
  if (dp1 == 0.0) {
    throw DegenerateGeometryError("D_p1 = 0: the ratio d = D_p2/D_p1 is undefined");
  }
  return dp2 / dp1;
}

Mismatch derived_mismatch(double inv_vp, double inv_v1, double inv_v2) {
  Mismatch m;
  m.dp1 = inv_vp - inv_v1;
  m.dp2 = inv_vp - inv_v2;
  m.lambda = inv_vp - 0.5 * (inv_v1 + inv_v2);
  m.d = inv_v1 - inv_v2;
  return m;
}

Mismatch derived_mismatch(const CrystalParams& crystal) { return crystal.mismatch(); }

CrystalParams::CrystalParams(double length_mm, double inv_vp, double inv_v1, double inv_v2,
                             double omega0_1, double omega0_2)
    : length_(length_mm),
      inv_vp_(inv_vp),
      inv_v1_(inv_v1),
      inv_v2_(inv_v2),
      omega0_1_(omega0_1),
      omega0_2_(omega0_2) {
  require_positive_finite(length_mm, "crystal length L");
  require_positive_finite(inv_vp, "1/v_p");
  require_positive_finite(inv_v1, "1/v_1");
  require_positive_finite(inv_v2, "1/v_2");
  if (!std::isfinite(omega0_1) || !std::isfinite(omega0_2)) {
    throw DomainError("central frequencies must be finite");
  }
  if (inv_v1_ < inv_v2_) {
    std::swap(inv_v1_, inv_v2_);
    std::swap(omega0_1_, omega0_2_);
    relabeled_ = true;
  }
}

int CrystalParams::internal_field(int field) const {
  if (field != 1 && field != 2) {
    throw DomainError("field index must be 1 or 2, got " + std::to_string(field));
  }
  return relabeled_ ? 3 - field : field;
}

Mismatch CrystalParams::mismatch() const {
  return derived_mismatch(inv_vp_, inv_v1_, inv_v2_);
}

DelayLine::DelayLine(double inv_g1, double inv_g2) : inv_g1_(inv_g1), inv_g2_(inv_g2) {
  if (!std::isfinite(inv_g1) || !std::isfinite(inv_g2)) {
    throw DomainError("delay-line inverse group velocities must be finite");
  }
  if (inv_g1 == inv_g2) {
    throw DomainError("delay line with 1/g_1 == 1/g_2 cannot scan the dip");
  }
}

double tau_l_of_length(const DelayLine& delay, double length_mm) {
  return delay.delay_per_mm() * length_mm;
}

void NormalizationConstants::validate() const {
  for (auto [value, name] : {std::pair{c_n, "c_N"}, std::pair{c_s, "c_S"},
                             std::pair{c_a_sq, "c_A_sq"}}) {
    if (!std::isfinite(value) || value < 0.0) {
      throw DomainError(std::string(name) + " must be finite and non-negative");
    }
  }
}

}  // namespace biphoton
