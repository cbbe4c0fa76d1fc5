#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "biphoton/error.hpp"
#include "biphoton/two_photon.hpp"
#include "oracles.hpp"

namespace biphoton {
namespace {

const CrystalParams kBbo(1.5, oracle::kInvVp, oracle::kInvV1, oracle::kInvV2);
// Lambda = 0: the pump velocity is the mean of the two field velocities.
const CrystalParams kMatched(1.5, 0.5 * (oracle::kInvV1 + oracle::kInvV2), oracle::kInvV1,
                             oracle::kInvV2);
const DelayLine kQuartz(oracle::kInvG1, oracle::kInvG2);

PumpField make_field(const oracle::TwoPulse& o) {
  return PumpField(PumpPulse(o.p1.xi, o.p1.tau, o.p1.a), PumpPulse(o.p2.xi, o.p2.tau, o.p2.a),
                   o.theta, o.phi);
}

oracle::Rho rho_oracle(const oracle::TwoPulse& o, const CrystalParams& c, double tau_l) {
  const Mismatch m = c.mismatch();
  return oracle::rho(o, m.lambda, m.d, c.length(), tau_l);
}

const oracle::TwoPulse kFig4{{1.0, 1e-13, 0.0}, {1.5, 0.5e-13, 0.0}, 0.0, oracle::pi};

TEST(TwoPhotonAmplitude, WindowAndPeak) {
  const PumpField single = PumpField::single(PumpPulse(1.0, 1e-13));
  const double dl = kMatched.dip_width();
  const double d = kMatched.mismatch().d;
  EXPECT_EQ(std::abs(two_photon_amplitude(single, kMatched, 0.0, -0.1 * dl, {})), 0.0);
  EXPECT_EQ(std::abs(two_photon_amplitude(single, kMatched, 0.0, 1.1 * dl, {})), 0.0);
  EXPECT_NEAR(std::abs(two_photon_amplitude(single, kMatched, 0.0, 0.5 * dl, {})),
              std::sqrt(10.0) / d, 1e-12 * std::sqrt(10.0) / d);
}

TEST(TwoPhotonAmplitude, TracesShiftedPump) {
  const oracle::TwoPulse o{{1.0, 1e-13, 3.0}, {0.6, 0.7e-13, 0.0}, 1e-13, 0.4};
  const PumpField f = make_field(o);
  const Mismatch m = kBbo.mismatch();
  const double tau = 0.3 * kBbo.dip_width();
  for (double t0 = -3e-13; t0 <= 3e-13; t0 += 0.25e-13) {
    const double want = std::sqrt(10.0) / m.d * std::abs(o.time(m.lambda / m.d * tau + t0));
    EXPECT_NEAR(std::abs(two_photon_amplitude(f, kBbo, t0, tau, {})), want, 1e-12 * want + 1e-300);
  }
}

TEST(R0, ClosedFormsMatchEnergyOracle) {
  const Mismatch m = kBbo.mismatch();
  const oracle::TwoPulse base{{1.0, 1e-13, 0.0}, {1.0, 1e-13, 0.0}, 20e-13, 0.0};
  const R0Parts parts = R0_gaussian(make_field(base), kBbo, {});
  EXPECT_NEAR(parts.r01, 10.2172348151, 1e-9);
  EXPECT_NEAR(parts.r01, std::sqrt(oracle::pi) * 10.0 * 1.5 * 2e-13 / (2.0 * std::sqrt(2.0) * m.d),
              1e-12);
  for (const oracle::TwoPulse& o :
       {oracle::TwoPulse{{1.0, 1e-13, 0.0}, {1.0, 1e-13, 0.0}, 0.0, 0.0},
        oracle::TwoPulse{{1.3, 0.8e-13, 4.0}, {0.7, 1.4e-13, -2.0}, 1.1e-13, 2.2},
        kFig4}) {
    const double want = oracle::r0(o, 10.0, m.d, 1.5);
    const PumpField f = make_field(o);
    EXPECT_NEAR(R0_gaussian(f, kBbo, {}).total(), want, 1e-12 * want);
    EXPECT_NEAR(R0_two_pulse(f, kBbo, {}).total(), want, 1e-9 * want);
    EXPECT_NEAR(R0_general(f, kBbo, {}), want, 1e-9 * want);
  }
}

TEST(R0, OverlapLimits) {
  const PumpPulse p(1.0, 1e-13);
  const R0Parts single = R0_gaussian(PumpField::single(p), kBbo, {});
  const R0Parts doubled = R0_gaussian(PumpField(p, p, 0.0, 0.0), kBbo, {});
  EXPECT_NEAR(doubled.total(), 4.0 * single.total(), 1e-12 * single.total());
  EXPECT_NEAR(doubled.r02, doubled.r01, 1e-12 * doubled.r01);
  const R0Parts apart = R0_gaussian(PumpField(p, p, 20e-13, 0.0), kBbo, {});
  EXPECT_LT(std::abs(apart.r02), 1e-6 * apart.r01);
  EXPECT_NEAR(doubled.total() / apart.total(), 2.0, 1e-12);
  const R0Parts quadrature = R0_gaussian(PumpField(p, p, 0.0, oracle::pi / 2.0), kBbo, {});
  EXPECT_LT(std::abs(quadrature.r02), 1e-15 * quadrature.r01);
  const PumpField destructive(p, p, 0.0, oracle::pi);
  EXPECT_LT(std::abs(R0_gaussian(destructive, kBbo, {}).total()), 1e-12 * single.total());
  EXPECT_THROW((void)rho_gaussian(destructive, kBbo, 0.5 * kBbo.dip_width(), {}), DomainError);
  EXPECT_THROW(HomModel(destructive, kBbo, {}), DomainError);
}

TEST(Rho, GaussianAndGenericMatchOracle) {
  for (const oracle::TwoPulse& o :
       {kFig4, oracle::TwoPulse{{1.0, 1e-13, 2.0}, {0.8, 0.7e-13, -3.0}, 1.7e-13, 0.9},
        oracle::TwoPulse{{1.0, 1e-13, 5.0}, {1.0, 1e-13, 5.0}, 2.04e-13, 0.0}}) {
    const PumpField f = make_field(o);
    for (double frac : {0.05, 0.3, 0.5, 0.81}) {
      const double tau_l = frac * kBbo.dip_width();
      const oracle::Rho want = rho_oracle(o, kBbo, tau_l);
      const double scale = std::abs(want.same) + std::abs(want.cross);
      const RhoParts g = rho_gaussian(f, kBbo, tau_l, {});
      EXPECT_NEAR(g.rho1, want.same, 1e-9 * scale) << frac;
      EXPECT_NEAR(g.rho2, want.cross, 1e-9 * scale) << frac;
      const RhoParts q = rho_two_pulse(f, kBbo, tau_l, {});
      EXPECT_NEAR(q.rho1, want.same, 1e-8 * scale) << frac;
      EXPECT_NEAR(q.rho2, want.cross, 1e-8 * scale) << frac;
      EXPECT_NEAR(rho_general(f, kBbo, tau_l, {}), want.total(), 1e-8 * scale) << frac;
    }
  }
}

TEST(Rho, VanishesOutsideDip) {
  const PumpField f = make_field(kFig4);
  const double dl = kBbo.dip_width();
  for (double tau_l : {-0.05 * dl, 0.0, dl, 1.05 * dl}) {
    EXPECT_EQ(rho_general(f, kBbo, tau_l, {}), 0.0);
    EXPECT_EQ(rho_gaussian(f, kBbo, tau_l, {}).total(), 0.0);
    EXPECT_EQ(HomModel(f, kBbo, {}).r_n(tau_l), 1.0);
  }
}

TEST(Rho, FullDipForMatchedCrystal) {
  const PumpField single = PumpField::single(PumpPulse(1.0, 1e-13));
  const double centre = 0.5 * kMatched.dip_width();
  EXPECT_NEAR(rho_general(single, kMatched, centre, {}), 1.0, 1e-9);
  EXPECT_NEAR(rho_gaussian(single, kMatched, centre, {}).total(), 1.0, 1e-12);
  // With Lambda = 0 the same-pulse integrand is constant in tau.
  const double dl = kMatched.dip_width();
  for (double tau_l : {0.1 * dl, 0.3 * dl, 0.8 * dl}) {
    EXPECT_NEAR(rho_gaussian(single, kMatched, tau_l, {}).rho1,
                2.0 * overlap_half_width(kMatched, tau_l) / dl, 1e-12);
  }
}

TEST(Rho, SecondPulseTerms) {
  const PumpPulse p(1.0, 1e-13);
  const double tau_l = 0.4 * kBbo.dip_width();
  const RhoParts none = rho_gaussian(PumpField(p, PumpPulse(0.0, 1e-13), 1e-13, 0.3), kBbo, tau_l, {});
  EXPECT_EQ(none.rho2, 0.0);
  const RhoParts equal = rho_gaussian(PumpField(p, p, 0.0, 0.0), kBbo, tau_l, {});
  EXPECT_NEAR(equal.rho2, equal.rho1, 1e-12 * equal.rho1);

  const oracle::TwoPulse o{{1.0, 1e-13, 1.0}, {0.6, 0.9e-13, 2.0}, 1.3e-13, 0.7};
  oracle::TwoPulse flipped = o;
  flipped.phi += oracle::pi;
  const PumpField f = make_field(o);
  const PumpField g = make_field(flipped);
  const R0Parts rf = R0_gaussian(f, kBbo, {});
  const R0Parts rg = R0_gaussian(g, kBbo, {});
  EXPECT_NEAR(rg.r02, -rf.r02, 1e-14 * rf.r01);
  // rho2 * R0 is the unnormalized cross integral; it flips sign with phi.
  const double cf = rho_gaussian(f, kBbo, tau_l, {}).rho2 * rf.total();
  const double cg = rho_gaussian(g, kBbo, tau_l, {}).rho2 * rg.total();
  EXPECT_NEAR(cg, -cf, 1e-12 * rf.r01);
}

TEST(Rho, IndependentOfCentralFrequency) {
  const CrystalParams shifted(1.5, oracle::kInvVp, oracle::kInvV1, oracle::kInvV2, 2.3e15, 2.2e15);
  const PumpField f = make_field(kFig4);
  for (double frac : {0.2, 0.5, 0.7}) {
    const double tau_l = frac * kBbo.dip_width();
    EXPECT_DOUBLE_EQ(rho_gaussian(f, shifted, tau_l, {}).total(),
                     rho_gaussian(f, kBbo, tau_l, {}).total());
    EXPECT_NEAR(rho_general(f, shifted, tau_l, {}), rho_general(f, kBbo, tau_l, {}), 1e-12);
  }
}

TEST(Interferogram, FourThreeDipsAndUnitBaseline) {
  const HomModel model(make_field(kFig4), kBbo, {});
  const Interferogram ig = interferogram(model, kQuartz, default_tau_l_grid(kBbo, 241));
  EXPECT_EQ(oracle::count_local_minima(ig.r_n), 3);
  for (std::size_t i = 0; i < ig.tau_l.size(); ++i) {
    if (ig.tau_l[i] <= 0.0 || ig.tau_l[i] >= ig.dip_width) {
      EXPECT_EQ(ig.r_n[i], 1.0);
    }
    EXPECT_NEAR(ig.length_mm[i] * kQuartz.delay_per_mm(), ig.tau_l[i], 1e-25);
    EXPECT_GE(ig.r_n[i], 0.0);
  }
  EXPECT_EQ(ig.method, HomMethod::kGaussianClosedForm);
}

TEST(Interferogram, GenericPathAgrees) {
  const PumpField f = make_field(kFig4);
  const GridSpec grid = default_tau_l_grid(kBbo, 49);
  const auto a = interferogram(HomModel(f, kBbo, {}), kQuartz, grid);
  const auto b = interferogram(HomModel(f, kBbo, {}, HomMethod::kGenericQuadrature), kQuartz, grid);
  for (std::size_t i = 0; i < a.r_n.size(); ++i) EXPECT_NEAR(a.r_n[i], b.r_n[i], 1e-6);
}

TEST(Interferogram, MirrorSymmetricWithoutDelay) {
  for (double phi : {0.0, 1.1, oracle::pi}) {
    const PumpField f(PumpPulse(1.0, 1e-13), PumpPulse(0.8, 0.6e-13), 0.0, phi);
    const HomModel model(f, kBbo, {});
    const double dl = kBbo.dip_width();
    for (double frac : {0.05, 0.2, 0.37, 0.49}) {
      EXPECT_NEAR(model.r_n(frac * dl), model.r_n((1.0 - frac) * dl), 1e-12) << phi;
    }
  }
}

TEST(Interferogram, OverLengthUsesDelayLine) {
  const HomModel model(make_field(kFig4), kBbo, {});
  const double l_dip = kQuartz.length_for_delay(kBbo.dip_width());
  const auto ig = interferogram_over_length(model, kQuartz, {-0.1 * l_dip, 1.1 * l_dip, 61});
  EXPECT_DOUBLE_EQ(ig.length_mm.front(), -0.1 * l_dip);
  EXPECT_NEAR(ig.tau_l.back(), 1.1 * kBbo.dip_width(), 1e-24);
}

TEST(Interferogram, ThreadCountDoesNotChangeBits) {
  const HomModel model(make_field(kFig4), kBbo, {});
  const GridSpec grid = default_tau_l_grid(kBbo, 97);
  const auto one = interferogram(model, kQuartz, grid, 1);
  const auto many = interferogram(model, kQuartz, grid, 6);
  EXPECT_EQ(one.r_n, many.r_n);
  EXPECT_EQ(one.rho2, many.rho2);
}

TEST(HomModel, RejectsNegativeOrZeroD) {
  const CrystalParams flat(1.0, 2e-12, 1e-12, 1e-12);
  EXPECT_THROW(HomModel(make_field(kFig4), flat, {}), DegenerateGeometryError);
  EXPECT_STREQ(to_string(HomMethod::kGenericQuadrature), "generic-quadrature");
}

}  // namespace
}  // namespace biphoton
