#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "biphoton/error.hpp"
#include "biphoton/one_photon.hpp"
#include "oracles.hpp"

namespace biphoton {
namespace {

// p_{x,y}(nu) written out and integrated by Simpson.
double kernel_oracle(double x, double y, double nu) {
  return oracle::simpson([&](double t) { return (x - t) / (x - y * t) * std::cos(nu * t); }, 0.0,
                         x, 800) /
         (oracle::pi * y);
}

SpectrumCurve gaussian_curve(const GridSpec& grid, int field, double centre, double width) {
  SpectrumCurve c;
  c.grid = grid;
  c.field = field;
  for (double nu : grid.points()) {
    c.values.push_back(std::exp(-(nu - centre) * (nu - centre) / (width * width)));
  }
  return c;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

TEST(SpectrumFromPartner, ReproducesDirectSpectrum) {
  const PumpField f(PumpPulse(1.0, 1e-13), PumpPulse(1.0, 1e-13), 3e-13, 0.0);
  const GridSpec partner_grid{-30e13, 30e13, 3001};
  const GridSpec target_grid{-15e13, 15e13, 151};
  // BBO rebuilds field 2 from field 1; the mirrored pump velocity swaps
  // which field may be rebuilt.
  const CrystalParams bbo(10.0, oracle::kInvVp, oracle::kInvV1, oracle::kInvV2);
  const CrystalParams mirrored(10.0, oracle::kInvVpMirrored, oracle::kInvV1, oracle::kInvV2);
  for (const auto& [crystal, target] : {std::pair{bbo, 2}, std::pair{mirrored, 1}}) {
    const auto partner = spectrum_curve(f, crystal, 3 - target, partner_grid, {});
    const auto rebuilt = spectrum_from_partner(partner, crystal, {}, target_grid);
    const auto direct = spectrum_curve(f, crystal, target, target_grid, {});
    EXPECT_EQ(rebuilt.field, target);
    EXPECT_EQ(rebuilt.provenance, SpectrumProvenance::kFromPartner);
    EXPECT_LT(oracle::relative_l2(rebuilt.values, direct.values), 1e-3) << target;
  }
}

TEST(SpectrumFromPartner, MatchesLiteralKernelConvolution) {
  // S_2(nu) = int dw p_{x,|r|}(nu - w) S_1(-w / r), r = D_p1 / D_p2.
  const CrystalParams crystal(1.5, oracle::kInvVp, oracle::kInvV1, oracle::kInvV2);
  const Mismatch m = crystal.mismatch();
  const double x = m.d * 1.5;
  const double r = m.dp1 / m.dp2;
  const SpectrumCurve partner = gaussian_curve({-20e13, 20e13, 801}, 1, 1e13, 3e13);
  const GridSpec target{-8e13, 8e13, 5};
  const auto got = spectrum_from_partner(partner, crystal, {}, target);
  const double w_lo = -r * 20e13;
  const double w_hi = r * 20e13;
  for (std::size_t k = 0; k < target.n; ++k) {
    const double nu = target.at(k);
    const double want = oracle::simpson(
        [&](double w) { return kernel_oracle(x, r, nu - w) * partner.interpolate(-w / r); },
        std::min(w_lo, w_hi), std::max(w_lo, w_hi), 4000);
    EXPECT_NEAR(got.values[k], want, 1e-4 * std::abs(want) + 1e-6) << nu;
  }
}

TEST(SpectrumFromPartner, NarrowPartnerSiftsTheKernel) {
  const CrystalParams crystal(1.5, oracle::kInvVp, oracle::kInvV1, oracle::kInvV2);
  const Mismatch m = crystal.mismatch();
  const double r = m.dp1 / m.dp2;
  const double centre = 5e13;
  const SpectrumCurve partner = gaussian_curve({-20e13, 20e13, 4001}, 1, centre, 0.2e13);
  const GridSpec target{-20e13, 20e13, 201};
  const auto got = spectrum_from_partner(partner, crystal, {}, target);
  std::vector<double> shape;
  for (double nu : target.points()) shape.push_back(kernel_oracle(m.d * 1.5, r, nu + r * centre));
  EXPECT_GT(oracle::pearson(got.values, shape), 0.99);
}

TEST(SpectrumFromPartner, OppositeSignedWalkOffCorrelatesSameSide) {
  // 1/v_p between 1/v_2 and 1/v_1 makes D_p1 and D_p2 differ in sign.
  const CrystalParams crystal(1.5, 55.0e-13, oracle::kInvV1, oracle::kInvV2);
  const Mismatch m = crystal.mismatch();
  ASSERT_LT(m.dp1 * m.dp2, 0.0);
  ASSERT_GE(std::abs(m.dp1), std::abs(m.dp2));
  const double centre = 6e13;
  const SpectrumCurve partner = gaussian_curve({-20e13, 20e13, 2001}, 2, centre, 0.5e13);
  const GridSpec target{-20e13, 20e13, 401};
  const auto got = spectrum_from_partner(partner, crystal, {}, target);
  const double peak = target.at(argmax(got.values));
  EXPECT_GT(peak, 0.0);
  EXPECT_NEAR(peak, -(m.dp2 / m.dp1) * centre, 2.0 * target.step());

  // Same-signed walk-off puts the peak on the other side.
  const CrystalParams bbo(1.5, oracle::kInvVp, oracle::kInvV1, oracle::kInvV2);
  SpectrumCurve field1 = partner;
  field1.field = 1;
  const auto mirrored = spectrum_from_partner(field1, bbo, {}, target);
  EXPECT_LT(target.at(argmax(mirrored.values)), 0.0);
}

TEST(SpectrumFromPartner, RefusesWhenPremiseFails) {
  const CrystalParams bbo(1.5, oracle::kInvVp, oracle::kInvV1, oracle::kInvV2);
  const SpectrumCurve field2 = gaussian_curve({-10e13, 10e13, 101}, 2, 0.0, 2e13);
  try {
    (void)spectrum_from_partner(field2, bbo, {});
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("swap"), std::string::npos);
  }
}

TEST(SpectrumFromPartner, WarnsOnTruncatedPartner) {
  const CrystalParams bbo(1.5, oracle::kInvVp, oracle::kInvV1, oracle::kInvV2);
  const SpectrumCurve wide = gaussian_curve({-5e13, 5e13, 201}, 1, 0.0, 4e13);
  EXPECT_FALSE(spectrum_from_partner(wide, bbo, {}).warnings.empty());
  const SpectrumCurve narrow = gaussian_curve({-20e13, 20e13, 801}, 1, 0.0, 2e13);
  EXPECT_TRUE(spectrum_from_partner(narrow, bbo, {}).warnings.empty());
}

}  // namespace
}  // namespace biphoton
