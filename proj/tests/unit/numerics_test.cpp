#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "biphoton/error.hpp"
#include "biphoton/numerics.hpp"
#include "oracles.hpp"

namespace biphoton {
namespace {

TEST(Integrate1d, SineOverHalfPeriod) {
  const QuadResult r = integrate_1d([](double x) { return std::sin(x); }, 0.0, oracle::pi);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  EXPECT_LE(r.error, 1e-8);
  EXPECT_GT(r.evaluations, 0u);
}

TEST(Integrate1d, ConstantKernelIntegrand) {
  const double x = 2.76e-13;
  QuadSpec spec;
  spec.abs_tol = 1e-300;
  const QuadResult r =
      integrate_1d([x](double t) { return t < x ? (x - t) / (x - t) : 1.0; }, 0.0, x, spec);
  EXPECT_NEAR(r.value, x, 1e-12 * x);
}

TEST(Integrate1d, TruncatedGaussianMatchesClosedForm) {
  const double tau = 1e-13;
  QuadSpec spec;
  const double cut = tau * std::sqrt(-std::log(spec.truncation_eps));
  spec.abs_tol = 1e-300;
  const QuadResult r = integrate_1d(
      [tau](double t) { return std::exp(-t * t / (tau * tau)); }, -cut, cut, spec);
  // The truncated tails carry about 1e-12 of the mass.
  EXPECT_NEAR(r.value, tau * std::sqrt(oracle::pi), 2e-12 * tau);
}

TEST(Integrate1d, ZeroWidthIsZero) {
  EXPECT_EQ(integrate_1d([](double) { return 1.0; }, 1.0, 1.0).value, 0.0);
}

TEST(Integrate1d, DepthExhaustionCarriesBestEstimate) {
  QuadSpec spec;
  spec.max_depth = 2;
  spec.rel_tol = 1e-14;
  spec.abs_tol = 1e-300;
  try {
    (void)integrate_1d([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, spec);
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_NEAR(e.best_estimate(), 2.0, 0.1);
    EXPECT_GT(e.achieved_error(), 0.0);
  }
}

TEST(Integrate1d, BreakpointsAndSegments) {
  const std::vector<double> bp{0.0, 0.5, 1.0, 3.0};
  const auto f = [](double x) { return x * x; };
  EXPECT_NEAR(integrate_1d(f, bp).value, 9.0, 1e-12);
  const std::vector<Interval> segs{{0.0, 1.0}, {2.0, 3.0}};
  EXPECT_NEAR(integrate_segments(f, segs).value, 1.0 / 3.0 + (27.0 - 8.0) / 3.0, 1e-12);
}

TEST(Integrate1d, LinearityAndAdditivityOnRandomPolynomials) {
  auto g = oracle::rng(11);
  QuadSpec spec;
  spec.abs_tol = 1e-300;
  spec.rel_tol = 1e-13;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p(6), q(6);
    for (auto& c : p) c = oracle::uniform(g, -2.0, 2.0);
    for (auto& c : q) c = oracle::uniform(g, -2.0, 2.0);
    const auto poly = [](const std::vector<double>& c) {
      return [c](double x) {
        double s = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
        return s;
      };
    };
    const double a = oracle::uniform(g, -1.0, 0.0);
    const double m = oracle::uniform(g, 0.0, 1.0);
    const double b = oracle::uniform(g, 1.0, 2.0);
    const double alpha = oracle::uniform(g, -3.0, 3.0);
    const auto fp = poly(p);
    const auto fq = poly(q);
    const double ip = integrate_1d(fp, a, b, spec).value;
    const double iq = integrate_1d(fq, a, b, spec).value;
    const double combo =
        integrate_1d([&](double x) { return alpha * fp(x) + fq(x); }, a, b, spec).value;
    EXPECT_NEAR(combo, alpha * ip + iq, 1e-12 * (1.0 + std::abs(combo)));
    const double split = integrate_1d(fp, a, m, spec).value + integrate_1d(fp, m, b, spec).value;
    EXPECT_NEAR(split, ip, 1e-12 * (1.0 + std::abs(ip)));
  }
}

TEST(Integrate2dNested, SeparableGaussiansFactorize) {
  const auto gx = [](double x) { return std::exp(-x * x); };
  const auto gy = [](double y) { return std::exp(-2.0 * (y - 0.3) * (y - 0.3)); };
  QuadSpec spec;
  spec.abs_tol = 1e-300;
  const double ix = integrate_1d(gx, -6.0, 6.0, spec).value;
  const double iy = integrate_1d(gy, -5.0, 5.0, spec).value;
  const QuadResult r = integrate_2d_nested(
      [&](double x, double y) { return gx(x) * gy(y); }, -6.0, 6.0,
      [](double) { return IntervalSet({-5.0, 5.0}); }, spec);
  EXPECT_NEAR(r.value, ix * iy, 1e-9 * ix * iy);
}

TEST(Integrate2dNested, TrivialDomains) {
  const auto unit = [](double) { return IntervalSet({0.0, 1.0}); };
  const auto one = [](double, double) { return 1.0; };
  EXPECT_EQ(integrate_2d_nested(one, 0.5, 0.5, unit).value, 0.0);
  EXPECT_NEAR(integrate_2d_nested(one, 0.0, 1.0, unit).value, 1.0, 1e-14);
}

TEST(IntervalSet, MergesAndIntersects) {
  IntervalSet s;
  s.add({0.0, 1.0});
  s.add({0.5, 2.0});
  s.add({3.0, 4.0});
  ASSERT_EQ(s.parts().size(), 2u);
  EXPECT_EQ(s.hull().lo, 0.0);
  EXPECT_EQ(s.hull().hi, 4.0);
  const IntervalSet c = s.clipped({1.5, 3.5});
  ASSERT_EQ(c.parts().size(), 2u);
  EXPECT_EQ(c.parts()[0].lo, 1.5);
  EXPECT_EQ(c.parts()[1].hi, 3.5);
  const IntervalSet t = s.intersect(IntervalSet({1.0, 3.2}).shifted(0.1));
  ASSERT_EQ(t.parts().size(), 2u);
  EXPECT_DOUBLE_EQ(t.parts()[0].lo, 1.1);
  EXPECT_DOUBLE_EQ(t.parts()[1].hi, 3.3);
}

TEST(OscillationBreakpoints, SplitsOnlyFastOscillations) {
  const auto slow = oscillation_breakpoints(0.0, 1.0, 5.0 * oracle::pi);
  EXPECT_EQ(slow.size(), 2u);
  const auto fast = oscillation_breakpoints(0.0, 1.0, 40.0 * oracle::pi);
  EXPECT_GE(fast.size(), 40u);
  EXPECT_EQ(fast.front(), 0.0);
  EXPECT_EQ(fast.back(), 1.0);
  for (std::size_t i = 1; i < fast.size(); ++i) EXPECT_GT(fast[i], fast[i - 1]);
}

TEST(ScanExtrema, CosineInteriorOnly) {
  const auto ex = scan_extrema([](double x) { return std::cos(x); }, {0.0, 2.0 * oracle::pi, 101});
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_EQ(ex[0].kind, ExtremumKind::kMinimum);
  EXPECT_NEAR(ex[0].location, oracle::pi, 1e-4 * 2.0 * oracle::pi / 100.0);
  EXPECT_NEAR(ex[0].value, -1.0, 1e-9);
}

TEST(ScanExtrema, ParabolaMinimum) {
  const auto ex = scan_extrema([](double x) { return (x - 1.0) * (x - 1.0); }, {0.0, 2.0, 40});
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_NEAR(ex[0].location, 1.0, 1e-4);
}

TEST(LocateExtrema, PlateauIsReportedSeparately) {
  const std::vector<double> xs{0, 1, 2, 3, 4, 5};
  const std::vector<double> ys{3, 1, 1, 1, 2, 0};
  const auto ex = locate_extrema(xs, ys);
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[0].kind, ExtremumKind::kPlateau);
  EXPECT_EQ(ex[1].kind, ExtremumKind::kMaximum);
  EXPECT_EQ(ex[1].location, 4.0);
}

TEST(ScanExtrema, Deterministic) {
  const auto f = [](double x) { return std::sin(3.0 * x) * std::exp(-0.1 * x); };
  const auto a = scan_extrema(f, {0.0, 10.0, 77});
  const auto b = scan_extrema(f, {0.0, 10.0, 77});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].location, b[i].location);
    EXPECT_EQ(a[i].value, b[i].value);
  }
}

TEST(MaximizeScalar, ParabolaAndSine) {
  const auto p = maximize_scalar([](double x) { return -(x - 2.0) * (x - 2.0); }, 0.0, 5.0, 1e-8);
  EXPECT_NEAR(p.argument, 2.0, 1e-7);
  const auto s = maximize_scalar([](double x) { return std::sin(x); }, 0.0, oracle::pi, 1e-8);
  EXPECT_NEAR(s.argument, oracle::pi / 2.0, 1e-7);
  EXPECT_NEAR(s.value, 1.0, 1e-14);
}

TEST(MaximizeScalar, RejectsNonUnimodal) {
  EXPECT_THROW((void)maximize_scalar([](double x) { return std::cos(x); }, -1.0, 2.0 * oracle::pi + 1.0,
                                     1e-8),
               NotUnimodalError);
}

TEST(GoldenSection, Minimum) {
  const auto m = golden_section_minimize([](double x) { return std::cosh(x - 0.7); }, -2.0, 3.0, 1e-9);
  // A smooth minimum only resolves its argument to about sqrt(epsilon).
  EXPECT_NEAR(m.argument, 0.7, 1e-7);
}

TEST(GridSpec, PointsIncludeEndpointsExactly) {
  const GridSpec g{-1.5e-13, 2.7e-13, 37};
  const auto pts = g.points();
  ASSERT_EQ(pts.size(), 37u);
  EXPECT_EQ(pts.front(), -1.5e-13);
  EXPECT_EQ(pts.back(), 2.7e-13);
  EXPECT_THROW((GridSpec{1.0, 0.0, 5}.validate()), DomainError);
  EXPECT_THROW((GridSpec{0.0, 1.0, 1}.validate()), DomainError);
}

TEST(QuadSpec, Validation) {
  QuadSpec s;
  s.rel_tol = 0.0;
  EXPECT_THROW(s.validate(), DomainError);
  s = {};
  s.max_depth = 0;
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(ParallelFor, EachIndexOnceAndLowestErrorWins) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  try {
    parallel_for(100, 4, [](std::size_t i) {
      if (i == 37 || i == 90) throw DomainError("index " + std::to_string(i));
    });
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_STREQ(e.what(), "index 37");
  }
}

}  // namespace
}  // namespace biphoton
