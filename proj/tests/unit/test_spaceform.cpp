#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spaceform_float/spaceform.hpp"

using namespace spaceform;

namespace {

constexpr double kTanh1 = 0.76159415595576488812;
constexpr double kAtanhHalf = 0.54930614433405484570;
constexpr double kLambdas[] = {-1.0, -0.25, 0.0, 0.25, 1.0};

Vec<2> random_point(std::mt19937_64& rng, double lambda, double frac = 0.9) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double r = lambda < 0.0 ? frac / std::sqrt(-lambda) : 2.0;
  Vec<2> p;
  do {
    p = Vec<2>(u(rng), u(rng));
  } while (p.norm() > 1.0);
  return r * p;
}

}  // namespace

TEST(TanLambda, Branches) {
  EXPECT_DOUBLE_EQ(tan_lambda(0.7, 0.0), 0.7);
  EXPECT_DOUBLE_EQ(tan_lambda(0.0, -1.0), 0.0);
  EXPECT_NEAR(tan_lambda(1.0, -1.0), kTanh1, 1e-15);
  EXPECT_NEAR(tan_lambda(std::numbers::pi / 4, 1.0), 1.0, 1e-15);
  // Curvature scaling: tan^λ(α) = tan^{-1}(√-λ α)/√-λ.
  EXPECT_NEAR(tan_lambda(0.5, -4.0), std::tanh(1.0) / 2.0, 1e-15);
}

TEST(TanLambda, OddIncreasingAndInverse) {
  for (double lambda : kLambdas) {
    double prev = -1e300;
    for (int i = -20; i <= 20; ++i) {
      const double a = 0.07 * i;
      const double t = tan_lambda(a, lambda);
      EXPECT_NEAR(t, -tan_lambda(-a, lambda), 1e-15);
      EXPECT_GT(t, prev);
      prev = t;
      EXPECT_NEAR(atan_lambda(t, lambda), a, 1e-13);
    }
  }
}

TEST(TanLambda, SphericalDomain) {
  EXPECT_THROW(tan_lambda(std::numbers::pi / 2, 1.0), DomainError);
  EXPECT_THROW(tan_lambda(-2.0, 1.0), DomainError);
  EXPECT_THROW(atan_lambda(1.0, -1.0), DomainError);
}

TEST(SpaceForm, MetricExamples) {
  const SpaceForm<2> h(-1.0);
  const Vec<2> e1 = Vec<2>::UnitX();
  for (double lambda : kLambdas) {
    EXPECT_DOUBLE_EQ(SpaceForm<2>(lambda).metric(Vec<2>::Zero(), e1, e1), 1.0);
  }
  EXPECT_DOUBLE_EQ(h.metric(Vec<2>(0.3, 0.1), Vec<2>::Zero(), e1), 0.0);
  // Radial direction at r = 1/2 in the Klein model: 1/(1 - r²)² = 16/9.
  EXPECT_NEAR(h.metric(Vec<2>(0.5, 0.0), e1, e1), 16.0 / 9.0, 1e-15);
  // Tangential direction: 1/(1 - r²).
  EXPECT_NEAR(h.metric(Vec<2>(0.5, 0.0), Vec<2>::UnitY(), Vec<2>::UnitY()), 4.0 / 3.0, 1e-15);
}

TEST(SpaceForm, MetricPositiveDefinite) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (double lambda : kLambdas) {
    const SpaceForm<2> s(lambda);
    for (int i = 0; i < 200; ++i) {
      const Vec<2> p = random_point(rng, lambda);
      const Vec<2> x(g(rng), g(rng));
      const Vec<2> y(g(rng), g(rng));
      EXPECT_GT(s.metric(p, x, x), 0.0);
      EXPECT_NEAR(s.metric(p, x, y), s.metric(p, y, x), 1e-14);
    }
  }
}

TEST(SpaceForm, DistanceToOrigin) {
  EXPECT_NEAR(SpaceForm<2>(-1.0).distance_to_origin(Vec<2>(0.5, 0.0)), kAtanhHalf, 1e-15);
  EXPECT_DOUBLE_EQ(SpaceForm<2>(0.0).distance_to_origin(Vec<2>(0.0, 0.3)), 0.3);
  EXPECT_NEAR(SpaceForm<2>(1.0).distance_to_origin(Vec<2>(0.6, 0.8)), std::numbers::pi / 4, 1e-15);
  EXPECT_EQ(SpaceForm<3>(-1.0).distance_to_origin(Vec<3>::Zero()), 0.0);
}

TEST(SpaceForm, TwoPointDistance) {
  const SpaceForm<2> h(-1.0);
  EXPECT_NEAR(h.distance(Vec<2>(0.5, 0.0), Vec<2>::Zero()), kAtanhHalf, 1e-15);
  EXPECT_NEAR(h.distance(Vec<2>(0.5, 0.0), Vec<2>(-0.5, 0.0)), 1.09861228866810969140, 1e-14);
  EXPECT_EQ(h.distance(Vec<2>(0.2, 0.3), Vec<2>(0.2, 0.3)), 0.0);
  EXPECT_NEAR(SpaceForm<2>(0.0).distance(Vec<2>(1, 2), Vec<2>(4, 6)), 5.0, 1e-15);
  // Sphere: two points at angular distance π/2 via the gnomonic chart.
  EXPECT_NEAR(SpaceForm<2>(1.0).distance(Vec<2>(1.0, 0.0), Vec<2>(-1.0, 0.0)), std::numbers::pi / 2, 1e-14);
}

TEST(SpaceForm, DistanceMatchesClosedForms) {
  std::mt19937_64 rng(5);
  for (double lambda : {-1.0, 1.0}) {
    const SpaceForm<2> s(lambda);
    for (int i = 0; i < 200; ++i) {
      const Vec<2> p = random_point(rng, lambda);
      const Vec<2> q = random_point(rng, lambda);
      const double c = (1.0 + lambda * p.dot(q)) /
                       std::sqrt((1.0 + lambda * p.squaredNorm()) * (1.0 + lambda * q.squaredNorm()));
      const double expected = lambda < 0.0 ? std::acosh(std::max(1.0, c)) : std::acos(std::min(1.0, c));
      EXPECT_NEAR(s.distance(p, q), expected, 1e-7 * (1.0 + expected));
      EXPECT_NEAR(s.distance(p, q), s.distance(q, p), 1e-14);
    }
  }
}

TEST(SpaceForm, VolumeDensity) {
  EXPECT_DOUBLE_EQ(SpaceForm<2>(0.0).volume_density(Vec<2>(3, 4)), 1.0);
  EXPECT_NEAR(SpaceForm<2>(-1.0).volume_density(Vec<2>(0.6, 0.0)), 1.953125, 1e-14);
  EXPECT_NEAR(SpaceForm<2>(1.0).volume_density(Vec<2>(0.0, 1.0)), 0.35355339059327376, 1e-15);
  EXPECT_NEAR(SpaceForm<3>(-1.0).volume_density(Vec<3>(0.6, 0.0, 0.0)), std::pow(0.64, -2.0), 1e-13);
}

TEST(SpaceForm, ExpOrigin) {
  const SpaceForm<2> h(-1.0);
  EXPECT_EQ(h.exp_origin(Vec<2>::Zero()), Vec<2>::Zero());
  const Vec<2> p = h.exp_origin(Vec<2>::UnitX());
  EXPECT_NEAR(p[0], kTanh1, 1e-15);
  EXPECT_EQ(p[1], 0.0);
  EXPECT_EQ(SpaceForm<2>(0.0).exp_origin(Vec<2>(1.5, -2.0)), Vec<2>(1.5, -2.0));
  EXPECT_THROW(SpaceForm<2>(1.0).exp_origin(Vec<2>(2.0, 0.0)), DomainError);
}

TEST(SpaceForm, ExpDistanceRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double lambda : kLambdas) {
    const SpaceForm<3> s(lambda);
    for (int i = 0; i < 200; ++i) {
      Vec<3> x(u(rng), u(rng), u(rng));
      if (lambda > 0.0) x *= 1.4 / std::sqrt(lambda) / std::max(1.0, x.norm() * 1.1);
      EXPECT_NEAR(s.distance_to_origin(s.exp_origin(x)), x.norm(), 1e-10);
    }
  }
}

TEST(SpaceForm, NormalConvertExamples) {
  const SpaceForm<2> h(-1.0);
  const Direction<2> e1(Vec<2>::UnitX());
  const Vec<2> n0 = h.normal_convert(Vec<2>::Zero(), e1);
  EXPECT_NEAR((n0 - Vec<2>::UnitX()).norm(), 0.0, 1e-15);
  const Vec<2> a = h.normal_convert(Vec<2>(0.5, 0.0), e1);
  EXPECT_NEAR(a[0], 0.75, 1e-15);
  EXPECT_NEAR(a[1], 0.0, 1e-15);
  const Vec<2> b = h.normal_convert(Vec<2>(0.0, 0.5), e1);
  EXPECT_NEAR(b[0], 0.86602540378443865, 1e-15);
  EXPECT_NEAR(b[1], 0.0, 1e-15);
}

TEST(SpaceForm, NormalConvertIsUnitAndOrthogonal) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  for (double lambda : kLambdas) {
    const SpaceForm<2> s(lambda);
    for (int i = 0; i < 300; ++i) {
      const Vec<2> x = random_point(rng, lambda);
      const Direction<2> ne = direction_at_angle(ang(rng));
      const Vec<2> nl = s.normal_convert(x, ne);
      const Vec<2> tangent(-ne[1], ne[0]);
      EXPECT_NEAR(s.metric(x, nl, nl), 1.0, 1e-10);
      EXPECT_NEAR(s.metric(x, nl, tangent), 0.0, 1e-10);
    }
  }
}

TEST(SpaceForm, BoundaryDensityExamples) {
  const Direction<2> e1(Vec<2>::UnitX());
  EXPECT_DOUBLE_EQ(SpaceForm<2>(0.0).boundary_density(Vec<2>(0.4, 0.7), e1), 1.0);
  EXPECT_NEAR(SpaceForm<2>(-1.0).boundary_density(Vec<2>(0.6, 0.0), e1), 1.25, 1e-15);
  EXPECT_NEAR(SpaceForm<2>(1.0).boundary_density(Vec<2>(1.0, 0.0), e1), 0.70710678118654752, 1e-15);
}

// λ-perimeter of a centred circle: Σ boundary_density·ds against the
// arclength of g^λ along the circle, ρ/√(1+λρ²).
TEST(SpaceForm, BoundaryDensityIntegratesToPerimeter) {
  for (double lambda : kLambdas) {
    const SpaceForm<2> s(lambda);
    const double rho = lambda < 0.0 ? 0.7 / std::sqrt(-lambda) : 0.8;
    const int m = 4096;
    double sum = 0.0, arc = 0.0;
    for (int i = 0; i < m; ++i) {
      const double t = 2.0 * std::numbers::pi * (i + 0.5) / m;
      const Vec<2> u(std::cos(t), std::sin(t));
      const Vec<2> x = rho * u;
      const Vec<2> tangent = rho * Vec<2>(-u[1], u[0]);
      sum += s.boundary_density(x, Direction<2>(u)) * rho * 2.0 * std::numbers::pi / m;
      arc += std::sqrt(s.metric(x, tangent, tangent)) * 2.0 * std::numbers::pi / m;
    }
    EXPECT_NEAR(sum / arc, 1.0, 1e-8) << "lambda " << lambda;
    EXPECT_NEAR(arc, 2.0 * std::numbers::pi * rho / std::sqrt(1.0 + lambda * rho * rho), 1e-10);
  }
}

TEST(SpaceForm, CurvatureConvert) {
  const Direction<2> e1(Vec<2>::UnitX());
  for (double lambda : kLambdas) {
    EXPECT_DOUBLE_EQ(SpaceForm<2>(lambda).curvature_convert(3.0, Vec<2>::Zero(), e1), 3.0);
  }
  EXPECT_DOUBLE_EQ(SpaceForm<2>(0.0).curvature_convert(3.0, Vec<2>(0.3, 0.9), e1), 3.0);
  EXPECT_NEAR(SpaceForm<2>(-1.0).curvature_convert(1.0, Vec<2>(0.6, 0.0), e1), 1.0, 1e-15);
  // Tangential position: ((1+λ|x|²)/1)^{3/2}.
  EXPECT_NEAR(SpaceForm<2>(-1.0).curvature_convert(1.0, Vec<2>(0.0, 0.6), e1), std::pow(0.64, 1.5), 1e-15);
}

TEST(SpaceForm, KleinTranslateExamples) {
  const SpaceForm<2> h(-1.0);
  const Vec<2> x(0.2, -0.4);
  EXPECT_NEAR((h.klein_translate(Vec<2>::Zero(), x) - x).norm(), 0.0, 1e-15);
  EXPECT_EQ(SpaceForm<2>(0.0).klein_translate(Vec<2>(1, 2), Vec<2>(3, 4)), Vec<2>(4, 6));
  const Vec<2> a(0.5, 0.0);
  EXPECT_NEAR((h.klein_translate(a, Vec<2>::Zero()) - a).norm(), 0.0, 1e-15);
  EXPECT_NEAR(h.distance(a, h.klein_translate(a, Vec<2>(0.2, 0.0))), h.distance_to_origin(Vec<2>(0.2, 0.0)), 1e-14);
}

TEST(SpaceForm, KleinTranslatePreservesDistance) {
  std::mt19937_64 rng(23);
  for (double lambda : kLambdas) {
    const SpaceForm<2> s(lambda);
    for (int i = 0; i < 1000; ++i) {
      // For λ > 0 keep geodesic radii below π/(4√λ) so images stay in the open hemisphere.
      const auto draw = [&]() -> Vec<2> {
        return lambda > 0.0 ? random_point(rng, -1.0, 0.45) / std::sqrt(lambda) : random_point(rng, lambda, 0.6);
      };
      const Vec<2> a = draw();
      const Vec<2> x = draw();
      const Vec<2> y = draw();
      const Vec<2> ax = s.klein_translate(a, x);
      const Vec<2> ay = s.klein_translate(a, y);
      ASSERT_TRUE(s.contains(ax));
      EXPECT_NEAR(s.distance(ax, ay), s.distance(x, y), 1e-10) << "lambda " << lambda;
    }
  }
}

TEST(SpaceForm, KleinTranslate3D) {
  const SpaceForm<3> s(-1.0);
  const Vec<3> a(0.3, -0.2, 0.4);
  const Vec<3> x(-0.1, 0.5, 0.2), y(0.6, 0.1, -0.3);
  EXPECT_NEAR(s.distance(s.klein_translate(a, x), s.klein_translate(a, y)), s.distance(x, y), 1e-12);
}

TEST(SpaceForm, DomainChecks) {
  EXPECT_TRUE(SpaceForm<2>(-1.0).contains(Vec<2>(0.99, 0.0)));
  EXPECT_FALSE(SpaceForm<2>(-1.0).contains(Vec<2>(1.0, 0.0)));
  EXPECT_FALSE(SpaceForm<2>(1.0).contains(Vec<2>(11.0, 0.0)));
  EXPECT_THROW(SpaceForm<2>(std::nan("")), DomainError);
  EXPECT_THROW(Direction<2>(Vec<2>(1.0, 1.0)), DomainError);
  EXPECT_NO_THROW(Direction<2>(Vec<2>(0.6, 0.8)));
}
