#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spaceform_float/floatarea.hpp"

using namespace spaceform;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kC2 = 0.65518534855222415179;
constexpr double kC3 = 0.56418958354775628695;
constexpr double kOmegaHyp = 8.0856987729951780869;   // 2π tanh(1)^{2/3}/√(1 − tanh²1)
constexpr double kOmegaSph = 3.7728547158054249840;   // α = π/6, λ = 1
constexpr double kConeHyp = 2.6103786758855574366;    // 2π(cosh 1 − cosh ½)
constexpr double kTargetUnitDisk = 4.1166509555026709411;

ConvexBody<2> disk(double r) { return Ellipsoid<2>::ball(r); }
ConvexBody<2> square() {
  return Polytope<2>::from_vertices({Vec<2>(-1, -1), Vec<2>(1, -1), Vec<2>(1, 1), Vec<2>(-1, 1)});
}

}  // namespace

TEST(Constants, CN) {
  EXPECT_NEAR(constant_c_n(2), kC2, 1e-15);
  EXPECT_NEAR(constant_c_n(3), kC3, 1e-15);
  EXPECT_NEAR(constant_c_n(4), 0.5 * std::pow(5.0 / (4.0 * kPi / 3.0), 0.4), 1e-15);
  EXPECT_THROW(constant_c_n(1), PreconditionError);
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-15);
  EXPECT_NEAR(unit_ball_volume(2), kPi, 1e-15);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * kPi / 3.0, 1e-14);
}

TEST(FloatingArea, Disks) {
  EXPECT_NEAR(floating_area<2>(disk(1.0), 0.0).value, 2.0 * kPi, 1e-12);
  EXPECT_NEAR(floating_area<2>(disk(std::tanh(1.0)), -1.0).value, kOmegaHyp, 1e-10);
  EXPECT_NEAR(floating_area<2>(disk(std::tan(kPi / 6)), 1.0).value, kOmegaSph, 1e-10);
  EXPECT_NEAR(floating_area<2>(disk(0.3), 0.0).value, 2.0 * kPi * std::cbrt(0.09), 1e-12);
}

TEST(FloatingArea, PolytopesVanishExactly) {
  for (double lambda : {-0.2, 0.0, 1.0}) {
    EXPECT_EQ(floating_area<2>(square(), lambda).value, 0.0);
    EXPECT_EQ(floating_area<3>(Polytope<3>::cube(0.4), lambda).value, 0.0);
  }
}

TEST(FloatingArea, ClosedFormForBalls) {
  EXPECT_NEAR(ball_floating_area_closed(1.0, 0.0, 2), 2.0 * kPi, 1e-14);
  EXPECT_NEAR(ball_floating_area_closed(1.0, 0.0, 3), 4.0 * kPi, 1e-13);
  EXPECT_NEAR(ball_floating_area_closed(1.0, -1.0, 2), kOmegaHyp, 1e-13);
  EXPECT_NEAR(ball_floating_area_closed(kPi / 6, 1.0, 2), kOmegaSph, 1e-13);
  EXPECT_THROW(ball_floating_area_closed(kPi / 2, 1.0, 2), DomainError);
  for (double lambda : {-1.0, 0.0, 1.0}) {
    const double a = 0.7;
    const ConvexBody<3> b = Ellipsoid<3>::ball(tan_lambda(a, lambda));
    EXPECT_NEAR(floating_area<3>(b, lambda).value / ball_floating_area_closed(a, lambda, 3), 1.0, 1e-6);
  }
}

TEST(FloatingArea, EllipseAffinePerimeter) {
  // Ω⁰ of an ellipse is 2π(ab)^{1/3}.
  EXPECT_NEAR(floating_area<2>(Ellipsoid<2>::axis_aligned(Vec<2>(2.0, 1.0)), 0.0).value / (2.0 * kPi * std::cbrt(2.0)),
              1.0, 1e-10);
  const Ellipsoid<2> rotated = Ellipsoid<2>::axis_aligned(Vec<2>(0.3, 0.7)).linear_image(rotation2(0.4));
  EXPECT_NEAR(floating_area<2>(rotated, 0.0).value / (2.0 * kPi * std::cbrt(0.21)), 1.0, 1e-10);
}

TEST(FloatingArea, EllipsoidAffineSurfaceArea) {
  // Ω⁰ of an ellipsoid is 4π√(abc).
  const ConvexBody<3> e = Ellipsoid<3>::axis_aligned(Vec<3>(0.9, 0.6, 0.4));
  EXPECT_NEAR(floating_area<3>(e, 0.0).value / (4.0 * kPi * std::sqrt(0.216)), 1.0, 1e-5);
}

TEST(FloatingArea, ErrorEstimateIsSmall) {
  const auto r = floating_area<2>(Smooth2D(0.5, {{2, 0.05, 0.0}, {3, 0.0, 0.02}}), -1.0);
  EXPECT_GT(r.value, 0.0);
  EXPECT_LT(r.quadrature_error, 1e-10 * r.value);
  EXPECT_EQ(r.resolution, 4096);
}

TEST(FloatingMeasure, HalfDisk) {
  const auto m = floating_measure<2>(disk(1.0), 0.0, [](const Vec<2>& x) { return x[0] >= 0.0; });
  EXPECT_NEAR(m.value, kPi, 1e-12);
  EXPECT_NEAR(floating_measure<2>(disk(1.0), 0.0, RegionPredicate<2>{}).value, 2.0 * kPi, 1e-12);
}

TEST(FloatingMeasure, SectorAdditivity) {
  const ConvexBody<2> k = Smooth2D(0.6, {{2, 0.04, -0.02}, {4, 0.0, 0.01}});
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (double lambda : {-1.0, 0.0, 1.0}) {
    const double total = floating_area<2>(k, lambda).value;
    for (int trial = 0; trial < 10; ++trial) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      const auto in = [=](const Vec<2>& x) {
        const double t = std::atan2(x[1], x[0]);
        return t >= a && t < b;
      };
      const auto out = [=](const Vec<2>& x) { return !in(x); };
      const double s = floating_measure<2>(k, lambda, in).value + floating_measure<2>(k, lambda, out).value;
      EXPECT_NEAR(s, total, 1e-10 * total);
    }
  }
}

TEST(ConeVolumeDifference, Examples) {
  const ConvexBody<2> e = Ellipsoid<2>::axis_aligned(Vec<2>(0.6, 0.3));
  EXPECT_NEAR(cone_volume_difference<2>(e, e, -1.0), 0.0, 1e-15);
  EXPECT_NEAR(cone_volume_difference<2>(disk(2.0), disk(1.0), 0.0), 3.0 * kPi, 1e-11);
  EXPECT_NEAR(cone_volume_difference<2>(disk(std::tanh(1.0)), disk(std::tanh(0.5)), -1.0), kConeHyp, 1e-11);
  EXPECT_NEAR(cone_volume_difference<3>(Ellipsoid<3>::ball(1.0), Ellipsoid<3>::ball(0.5), 0.0),
              4.0 * kPi / 3.0 * 0.875, 1e-6);
}

TEST(ConeVolumeDifference, MatchesVolumeSubtraction) {
  const ConvexBody<2> k = Smooth2D(0.55, {{2, 0.04, 0.01}, {3, 0.0, 0.02}});
  const ConvexBody<2> l = Ellipsoid<2>::axis_aligned(Vec<2>(0.3, 0.2), Vec<2>(0.05, 0.0));
  for (double lambda : {-1.0, 0.0, 1.0}) {
    const double diff = lambda_volume<2>(k, lambda) - lambda_volume<2>(l, lambda);
    EXPECT_NEAR(cone_volume_difference<2>(k, l, lambda, 16384) / diff, 1.0, 1e-7) << "lambda " << lambda;
  }
}

TEST(ConeVolumeDifference, Preconditions) {
  EXPECT_THROW(cone_volume_difference<2>(disk(1.0), disk(2.0), 0.0), PreconditionError);
  const ConvexBody<2> off = Ellipsoid<2>::ball(0.2, Vec<2>(0.5, 0.0));
  EXPECT_THROW(cone_volume_difference<2>(disk(1.0), off, 0.0), PreconditionError);
}

TEST(SymmetricDifference, MonteCarlo) {
  const auto same = symmetric_difference_volume<2>(disk(1.0), disk(1.0), 0.0, 100000, 3);
  EXPECT_LE(std::abs(same.estimate), 3.0 * same.std_error + 1e-15);
  const auto d = symmetric_difference_volume<2>(disk(1.0), disk(2.0), 0.0, 400000, 4);
  EXPECT_LE(std::abs(d.estimate - 3.0 * kPi), 3.0 * d.std_error);
  const ConvexBody<2> k = disk(std::tanh(1.0));
  const ConvexBody<2> l = disk(std::tanh(0.5));
  const auto h = symmetric_difference_volume<2>(k, l, -1.0, 400000, 5);
  EXPECT_LE(std::abs(h.estimate - cone_volume_difference<2>(k, l, -1.0)), 3.0 * h.std_error);
}

TEST(PowerFit, RecoversSyntheticLaw) {
  const auto grid = geometric_grid(1e-5, 1e-2, 8);
  std::vector<double> q;
  for (double d : grid) q.push_back(2.0 + 3.0 * std::pow(d, 0.7));
  const PowerFit f = fit_power_law(grid, q);
  EXPECT_NEAR(f.q0, 2.0, 1e-6);
  EXPECT_NEAR(f.exponent, 0.7, 1e-3);
  EXPECT_NEAR(f.q1, 3.0, 1e-2);
}

TEST(GeometricGrid, DescendingAndGeometric) {
  const auto g = geometric_grid(1e-5, 1e-2, 8);
  ASSERT_EQ(g.size(), 8u);
  EXPECT_NEAR(g.front(), 1e-2, 1e-17);
  EXPECT_NEAR(g.back(), 1e-5, 1e-20);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] / g[i - 1], std::pow(1e-3, 1.0 / 7.0), 1e-12);
  EXPECT_THROW(geometric_grid(1e-2, 1e-5, 8), PreconditionError);
  EXPECT_THROW(geometric_grid(1e-5, 1e-2, 1), PreconditionError);
}

TEST(DerivativeEstimate, UnitDiskQuick) {
  ConvergenceOptions opt;
  const auto r = derivative_estimate<2>(disk(1.0), 0.0, geometric_grid(1e-4, 1e-2, 5), opt);
  EXPECT_NEAR(r.target, kTargetUnitDisk, 1e-10);
  EXPECT_LE(r.relative_error, 1e-2);
  for (std::size_t i = 1; i < r.delta_grid.size(); ++i) EXPECT_LT(r.delta_grid[i], r.delta_grid[i - 1]);
  for (double q : r.quotients) EXPECT_TRUE(std::isfinite(q));
}
