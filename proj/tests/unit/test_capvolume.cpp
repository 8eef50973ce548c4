#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spaceform_float/capvolume.hpp"

using namespace spaceform;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSegment = 0.61418484930437842277;       // π/3 − √3/4
constexpr double kHypDiskArea = 3.4122762652849023064;    // 2π(cosh 1 − 1)
constexpr double kSphCapArea = 1.8403023690212202299;     // 2π(1 − cos π/4)
constexpr double kHypBallVolume = 5.1109327057082889769;  // π(sinh 2 − 2)
constexpr double kSphBallVolume = 1.7932095469548860710;  // π(π/2 − 1)

const Vec<2> e1 = Vec<2>::UnitX();

ConvexBody<2> unit_disk() { return Ellipsoid<2>::ball(1.0); }

}  // namespace

TEST(CapMeasure, Examples) {
  EXPECT_NEAR(cap_measure<2>(unit_disk(), e1, 1.0, 0.0), kPi / 2, 1e-13);
  EXPECT_NEAR(cap_measure<2>(unit_disk(), Vec<2>(0.6, -0.8), 0.5, 0.0), kSegment, 1e-13);
  const ConvexBody<2> hyp = Ellipsoid<2>::ball(std::tanh(1.0));
  EXPECT_NEAR(cap_measure<2>(hyp, e1, 2.0 * std::tanh(1.0), -1.0), kHypDiskArea, 1e-11);
  EXPECT_EQ(cap_measure<2>(unit_disk(), e1, 0.0, -1.0), 0.0);
}

TEST(CapMeasure, PolygonCapsAreExact) {
  const ConvexBody<2> sq = Polytope<2>::from_vertices({Vec<2>(-1, -1), Vec<2>(1, -1), Vec<2>(1, 1), Vec<2>(-1, 1)});
  EXPECT_NEAR(cap_measure<2>(sq, e1, 0.5, 0.0), 1.0, 1e-13);
  // Corner cap along the diagonal: right isosceles triangle with legs 0.5√2.
  const Vec<2> d = Vec<2>(1, 1).normalized();
  EXPECT_NEAR(cap_measure<2>(sq, d, 0.5, 0.0), 0.25, 1e-13);
}

TEST(CapMeasure, RejectsBadDepth) {
  EXPECT_THROW(cap_measure<2>(unit_disk(), e1, -0.1, 0.0), PreconditionError);
  EXPECT_THROW(cap_measure<2>(unit_disk(), e1, 2.5, 0.0), PreconditionError);
}

TEST(CapMeasure, StrictlyIncreasingInDepth) {
  const ConvexBody<2> k = Smooth2D(0.5, {{2, 0.05, 0.0}, {3, 0.0, 0.02}});
  const Vec<2> v = direction_at_angle(0.3).vec();
  const double w = width<2>(k, v);
  for (double lambda : {-1.0, 0.0, 1.0}) {
    double prev = -1.0;
    for (int i = 1; i <= 50; ++i) {
      const double g = cap_measure<2>(k, v, w * i / 50.0, lambda);
      EXPECT_GT(g, prev);
      prev = g;
    }
    EXPECT_NEAR(prev, lambda_volume<2>(k, lambda), 1e-11);
  }
}

TEST(LambdaVolume, Disks) {
  EXPECT_NEAR(lambda_volume<2>(unit_disk(), 0.0), kPi, 1e-14);
  EXPECT_NEAR(lambda_volume<2>(Ellipsoid<2>::ball(std::tanh(1.0)), -1.0), kHypDiskArea, 1e-13);
  EXPECT_NEAR(lambda_volume<2>(unit_disk(), 1.0), kSphCapArea, 1e-13);
  // Off-centre bodies go through the cap integral.
  const ConvexBody<2> moved = Ellipsoid<2>::axis_aligned(Vec<2>(0.5, 0.25), Vec<2>(0.2, -0.1));
  EXPECT_NEAR(lambda_volume<2>(moved, 0.0), kPi * 0.125, 1e-12);
}

TEST(LambdaVolume, Balls3D) {
  EXPECT_NEAR(lambda_volume<3>(Ellipsoid<3>::ball(1.0), 0.0), 4.0 * kPi / 3.0, 1e-13);
  EXPECT_NEAR(lambda_volume<3>(Ellipsoid<3>::ball(std::tanh(1.0)), -1.0), kHypBallVolume, 1e-12);
  EXPECT_NEAR(lambda_volume<3>(Ellipsoid<3>::ball(1.0), 1.0), kSphBallVolume, 1e-12);
  const ConvexBody<3> e = Ellipsoid<3>::axis_aligned(Vec<3>(0.5, 0.4, 0.3), Vec<3>(0.1, 0.0, 0.0));
  EXPECT_NEAR(lambda_volume<3>(e, 0.0), 4.0 * kPi / 3.0 * 0.06, 1e-11);
  EXPECT_NEAR(lambda_volume<3>(Polytope<3>::cube(1.0), 0.0), 8.0, 1e-12);
  EXPECT_NEAR(cap_measure<3>(Ellipsoid<3>::ball(1.0), Vec<3>::UnitZ(), 1.0, 0.0), 2.0 * kPi / 3.0, 1e-12);
}

TEST(CapMeasureMC, HalfDisk) {
  const auto mc = cap_measure_mc<2>(unit_disk(), e1, 1.0, 0.0, 1000000, 42);
  EXPECT_LE(std::abs(mc.estimate - kPi / 2), 3.0 * mc.std_error);
  EXPECT_GT(mc.std_error, 0.0);
  const auto zero = cap_measure_mc<2>(unit_disk(), e1, 0.0, 0.0, 1000, 42);
  EXPECT_EQ(zero.estimate, 0.0);
  EXPECT_EQ(zero.std_error, 0.0);
}

TEST(CapMeasureMC, Reproducible) {
  const ConvexBody<3> b = Ellipsoid<3>::ball(0.5);
  const auto a = cap_measure_mc<3>(b, Vec<3>::UnitX(), 0.3, -1.0, 20000, 9);
  const auto c = cap_measure_mc<3>(b, Vec<3>::UnitX(), 0.3, -1.0, 20000, 9);
  EXPECT_EQ(a.estimate, c.estimate);
  EXPECT_EQ(a.std_error, c.std_error);
}

TEST(CapDepthSolve, InvertsKnownCaps) {
  const double mu = kPi;
  EXPECT_NEAR(cap_depth_solve<2>(unit_disk(), e1, std::pow(kPi / 2, 2.0 / 3.0), 0.0).depth, 1.0, 1e-11);
  const CapDepth d = cap_depth_solve<2>(unit_disk(), e1, std::pow(kSegment, 2.0 / 3.0), 0.0);
  EXPECT_NEAR(d.depth, 0.5, 1e-11);
  EXPECT_LE(d.residual, 1e-10 * mu);
}

TEST(CapDepthSolve, MonotoneToZero) {
  const ConvexBody<2> k = Ellipsoid<2>::axis_aligned(Vec<2>(0.7, 0.4));
  const Vec<2> v = direction_at_angle(1.0).vec();
  double prev = 1e300;
  for (double delta = 1e-1; delta > 1e-7; delta *= 0.3) {
    const double s = cap_depth_solve<2>(k, v, delta, -1.0).depth;
    EXPECT_LT(s, prev);
    EXPECT_GT(s, 0.0);
    prev = s;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(CapDepthSolve, OutOfRange) {
  EXPECT_THROW(cap_depth_solve<2>(unit_disk(), e1, std::pow(kPi, 2.0 / 3.0), 0.0), OutOfRange);
  EXPECT_THROW(cap_depth_solve<2>(unit_disk(), e1, 0.0, 0.0), OutOfRange);
  EXPECT_THROW(cap_depth_solve<2>(unit_disk(), e1, -1.0, 0.0), OutOfRange);
}

TEST(FloatingBody, UnitDiskSegment) {
  const auto grid = circle_grid(256);
  const auto fb = floating_body<2>(unit_disk(), std::pow(kSegment, 2.0 / 3.0), 0.0, grid);
  ASSERT_FALSE(fb.empty);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(fb.profile.depths[i], 0.5, 1e-10);
    EXPECT_NEAR(fb.polytope().support(grid.dirs[i]), 0.5, 1e-10);
  }
}

TEST(FloatingBody, HyperbolicDiskProfileIsConstant) {
  const ConvexBody<2> k = Ellipsoid<2>::ball(std::tanh(1.0));
  const auto fb = floating_body<2>(k, 0.05, -1.0, circle_grid(128));
  const auto [lo, hi] = std::minmax_element(fb.profile.depths.begin(), fb.profile.depths.end());
  EXPECT_LE(*hi - *lo, 1e-8);
}

TEST(FloatingBody, ContainedAndNested) {
  const ConvexBody<2> k = Smooth2D(0.5, {{2, 0.05, 0.0}, {3, 0.0, 0.02}});
  const auto grid = circle_grid(256);
  const auto a = floating_body<2>(k, 1e-3, 1.0, grid);
  const auto b = floating_body<2>(k, 1e-2, 1.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec<2>& v = grid.dirs[i];
    EXPECT_LE(a.polytope().support(v), support<2>(k, v) + 1e-12);
    EXPECT_LE(b.polytope().support(v), a.polytope().support(v) + 1e-12);
  }
}

TEST(FloatingBody, RotationEquivariance) {
  const int n = 240;
  const auto grid = circle_grid(n);
  const int shift = 37;
  const double angle = 2.0 * kPi * shift / n;
  const Ellipsoid<2> e = Ellipsoid<2>::axis_aligned(Vec<2>(0.6, 0.3), Vec<2>(0.1, 0.05));
  const auto a = floating_body<2>(e, 5e-3, -1.0, grid);
  const auto b = floating_body<2>(e.linear_image(rotation2(angle)), 5e-3, -1.0, grid);
  for (int i = 0; i < n; ++i) {
    EXPECT_NEAR(b.profile.depths[(i + shift) % n], a.profile.depths[i], 1e-9);
  }
}

TEST(FloatingBody, EmptyForLargeDelta) {
  // Admissible δ, but the Wulff shape of a thin rectangle is empty.
  const ConvexBody<2> thin =
      Polytope<2>::from_vertices({Vec<2>(-1, -0.05), Vec<2>(1, -0.05), Vec<2>(1, 0.05), Vec<2>(-1, 0.05)});
  const double mu = 0.2;
  const auto fb = floating_body<2>(thin, 0.95 * std::pow(mu, 2.0 / 3.0), 0.0, circle_grid(64));
  EXPECT_TRUE(fb.empty);
  EXPECT_THROW(fb.polytope(), EmptyWulff);
  EXPECT_THROW(floating_body<2>(thin, std::pow(mu, 2.0 / 3.0) * 1.01, 0.0, circle_grid(64)), OutOfRange);
}

TEST(FloatingBody, Ball3D) {
  const auto fb = floating_body<3>(Ellipsoid<3>::ball(0.5), 1e-2, -1.0, icosphere_grid(1));
  const auto [lo, hi] = std::minmax_element(fb.profile.depths.begin(), fb.profile.depths.end());
  EXPECT_LE(*hi - *lo, 1e-8);
  EXPECT_GT(*lo, 0.0);
}

TEST(SandwichDeltas, Examples) {
  const auto [a, b] = sandwich_deltas(0.01, 0.0, 0.3, 0.1, 0.5);
  EXPECT_DOUBLE_EQ(a, 0.01);
  EXPECT_DOUBLE_EQ(b, 0.01);
  const auto [c, d] = sandwich_deltas(1.0, -1.0, 0.0, 0.0, 1.0);
  EXPECT_NEAR(c, 1.0, 1e-15);
  EXPECT_NEAR(d, 0.41997434161402606939, 1e-15);
  const auto [e, f] = sandwich_deltas(1.0, 1.0, 0.0, 0.0, kPi / 6);
  EXPECT_NEAR(e, 1.0, 1e-15);
  EXPECT_NEAR(f, 4.0 / 3.0, 1e-15);
}
