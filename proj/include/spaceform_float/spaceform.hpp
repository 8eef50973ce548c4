#pragma once

// Geometry of the Euclidean model (B^n(λ), g^λ) of the real space form of
// curvature λ: distances, densities, the exponential map at the origin and
// conversions between Euclidean and intrinsic boundary quantities.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spaceform_float/errors.hpp"

namespace spaceform {

template <int Dim>
using Vec = Eigen::Matrix<double, Dim, 1>;
template <int Dim>
using Mat = Eigen::Matrix<double, Dim, Dim>;
template <int Dim>
using Homogeneous = Eigen::Matrix<double, Dim + 1, Dim + 1>;

/// tan^λ: tanh(√−λ α)/√−λ, α, or tan(√λ α)/√λ depending on the sign of λ.
inline double tan_lambda(double alpha, double lambda) {
  if (lambda < 0.0) {
    const double k = std::sqrt(-lambda);
    return std::tanh(k * alpha) / k;
  }
  if (lambda == 0.0) return alpha;
  const double k = std::sqrt(lambda);
  if (std::abs(k * alpha) >= std::numbers::pi / 2) {
    throw DomainError("tan_lambda: |alpha| must be below pi/(2 sqrt(lambda))");
  }
  return std::tan(k * alpha) / k;
}

/// Inverse of tan_lambda on the same branch.
inline double atan_lambda(double x, double lambda) {
  if (lambda < 0.0) {
    const double k = std::sqrt(-lambda);
    if (std::abs(k * x) >= 1.0) {
      throw DomainError("atan_lambda: |x| must be below 1/sqrt(-lambda)");
    }
    return std::atanh(k * x) / k;
  }
  if (lambda == 0.0) return x;
  const double k = std::sqrt(lambda);
  return std::atan(k * x) / k;
}

struct Tolerances {
  double unit_norm = 1e-12;
  double round_trip = 1e-10;
  // λ>0 models only an open hemisphere; points beyond this Euclidean radius
  // are rejected.
  double spherical_radius_cap = 10.0;
};

/// Unit vector in R^n.
template <int Dim>
class Direction {
 public:
  Direction() { v_.setZero(); v_[0] = 1.0; }

  explicit Direction(const Vec<Dim>& unit, double tol = 1e-12) : v_(unit) {
    if (!(std::abs(unit.norm() - 1.0) <= tol)) {
      throw DomainError("Direction: vector is not of unit length");
    }
  }

  static Direction normalized(const Vec<Dim>& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw DomainError("Direction: cannot normalize a zero or non-finite vector");
    }
    Direction d;
    d.v_ = v / n;
    return d;
  }

  const Vec<Dim>& vec() const { return v_; }
  double operator[](int i) const { return v_[i]; }
  Direction operator-() const {
    Direction d;
    d.v_ = -v_;
    return d;
  }

 private:
  Vec<Dim> v_;
};

inline Direction<2> direction_at_angle(double theta) {
  return Direction<2>::normalized(Vec<2>(std::cos(theta), std::sin(theta)));
}

/// Squared norm of the bivector p∧q, computed from the 2x2 minors.
template <int Dim>
double wedge_norm2(const Vec<Dim>& p, const Vec<Dim>& q) {
  double s = 0.0;
  for (int i = 0; i < Dim; ++i) {
    for (int j = i + 1; j < Dim; ++j) {
      const double m = p[i] * q[j] - p[j] * q[i];
      s += m * m;
    }
  }
  return s;
}

template <int Dim>
class SpaceForm {
  static_assert(Dim >= 2, "space forms need dimension n >= 2");

 public:
  using Point = Vec<Dim>;
  static constexpr int dimension = Dim;

  explicit SpaceForm(double lambda, Tolerances tol = {}) : lambda_(lambda), tol_(tol) {
    if (!std::isfinite(lambda)) throw DomainError("SpaceForm: lambda must be finite");
  }

  double lambda() const { return lambda_; }
  const Tolerances& tolerances() const { return tol_; }

  /// 1/√−λ for λ<0, +∞ otherwise.
  double model_radius() const {
    return lambda_ < 0.0 ? 1.0 / std::sqrt(-lambda_) : std::numeric_limits<double>::infinity();
  }

  /// Largest admissible Euclidean norm (the model radius, or the spherical cap).
  double domain_radius() const {
    if (lambda_ < 0.0) return model_radius();
    if (lambda_ > 0.0) return tol_.spherical_radius_cap;
    return std::numeric_limits<double>::infinity();
  }

  bool contains(const Point& p) const {
    if (!p.allFinite()) return false;
    const double r = p.norm();
    if (lambda_ < 0.0) return r < model_radius();
    if (lambda_ > 0.0) return r <= tol_.spherical_radius_cap;
    return true;
  }

  void require_inside(const Point& p, const char* what) const {
    if (!contains(p)) {
      throw DomainError(std::string(what) + ": point lies outside the model domain");
    }
  }

  /// 1 + λ‖p‖².
  double conformal(const Point& p) const { return 1.0 + lambda_ * p.squaredNorm(); }

  /// g^λ_p(X, Y).
  double metric(const Point& p, const Point& x, const Point& y) const {
    const double w = conformal(p);
    return x.dot(y) / w - lambda_ * x.dot(p) * y.dot(p) / (w * w);
  }

  double distance_to_origin(const Point& p) const { return atan_lambda(p.norm(), lambda_); }

  /// Geodesic distance. Uses tan^λ d = sqrt(|p−q|² + λ|p∧q|²)/(1 + λ p·q),
  /// which is the rescaled cosh/cos law written without cancellation.
  double distance(const Point& p, const Point& q) const {
    const double chord2 = (p - q).squaredNorm() + lambda_ * wedge_norm2<Dim>(p, q);
    const double s = std::sqrt(std::max(chord2, 0.0));
    const double a = 1.0 + lambda_ * p.dot(q);
    if (lambda_ == 0.0) return s;
    const double k = std::sqrt(std::abs(lambda_));
    if (lambda_ > 0.0) return std::atan2(k * s, a) / k;
    return std::atanh(std::min(k * s / a, 1.0)) / k;
  }

  /// dvol^λ / dvol^e = (1 + λ‖p‖²)^{−(n+1)/2}.
  double volume_density(const Point& p) const {
    return std::pow(conformal(p), -0.5 * (Dim + 1));
  }

  Point exp_origin(const Point& x) const {
    const double len = x.norm();
    if (len == 0.0) return Point::Zero();
    return (tan_lambda(len, lambda_) / len) * x;
  }

  /// Outer g^λ-unit normal at x from the Euclidean outer unit normal.
  Point normal_convert(const Point& x, const Direction<Dim>& ne) const {
    const double xn = x.dot(ne.vec());
    const double scale = std::sqrt(conformal(x) / (1.0 + lambda_ * xn * xn));
    return scale * (ne.vec() + lambda_ * xn * x);
  }

  /// dvol^λ_{bd K} / dvol^e_{bd K} at x with Euclidean normal ne.
  double boundary_density(const Point& x, const Direction<Dim>& ne) const {
    const double xn = x.dot(ne.vec());
    return std::sqrt((1.0 + lambda_ * xn * xn) / std::pow(conformal(x), Dim));
  }

  /// Gauss-Kronecker curvature with respect to g^λ from the Euclidean one.
  double curvature_convert(double he, const Point& x, const Direction<Dim>& ne) const {
    const double xn = x.dot(ne.vec());
    return he * std::pow(conformal(x) / (1.0 + lambda_ * xn * xn), 0.5 * (Dim + 1));
  }

  /// Homogeneous matrix of the motion moving the origin to a. Acts on
  /// (x, 1); for λ≠0 it is a Lorentz boost (λ<0) or a sphere rotation (λ>0)
  /// seen in the gnomonic/projective chart.
  Homogeneous<Dim> translation_matrix(const Point& a) const {
    Homogeneous<Dim> t = Homogeneous<Dim>::Identity();
    t.template topRightCorner<Dim, 1>() = a;
    const double a2 = a.squaredNorm();
    if (lambda_ == 0.0 || a2 == 0.0) return t;
    const double s = std::sqrt(1.0 + lambda_ * a2);
    if (!(s > 0.0)) throw DomainError("translation_matrix: a outside the model");
    const Mat<Dim> par = a * a.transpose() / a2;
    t.template topLeftCorner<Dim, Dim>() = par + s * (Mat<Dim>::Identity() - par);
    t.template bottomLeftCorner<1, Dim>() = -lambda_ * a.transpose();
    return t;
  }

  /// Projective motion with klein_translate(a, 0) = a.
  Point klein_translate(const Point& a, const Point& x) const {
    require_inside(a, "klein_translate");
    require_inside(x, "klein_translate");
    if (lambda_ == 0.0) return a + x;
    const double a2 = a.squaredNorm();
    if (a2 == 0.0) return x;
    const Point par = (x.dot(a) / a2) * a;
    const Point perp = x - par;
    const double den = 1.0 - lambda_ * a.dot(x);
    if (!(den > 0.0)) throw DomainError("klein_translate: point is mapped to infinity");
    const Point y = (a + par + std::sqrt(1.0 + lambda_ * a2) * perp) / den;
    require_inside(y, "klein_translate");
    return y;
  }

 private:
  double lambda_;
  Tolerances tol_;
};

/// Apply a homogeneous map to a point.
template <int Dim>
Vec<Dim> apply_homogeneous(const Homogeneous<Dim>& h, const Vec<Dim>& x) {
  Eigen::Matrix<double, Dim + 1, 1> hx;
  hx.template head<Dim>() = x;
  hx[Dim] = 1.0;
  const Eigen::Matrix<double, Dim + 1, 1> y = h * hx;
  if (!(y[Dim] > 0.0)) throw DomainError("apply_homogeneous: point is mapped to infinity");
  return y.template head<Dim>() / y[Dim];
}

template <int Dim>
Homogeneous<Dim> linear_homogeneous(const Mat<Dim>& m) {
  Homogeneous<Dim> h = Homogeneous<Dim>::Identity();
  h.template topLeftCorner<Dim, Dim>() = m;
  return h;
}

inline Mat<2> rotation2(double angle) {
  Mat<2> r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

/// Rotation about a unit axis by angle (Rodrigues).
inline Mat<3> rotation3(const Vec<3>& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

}  // namespace spaceform
