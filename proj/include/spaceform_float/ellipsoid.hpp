#pragma once

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>
#include <vector>

#include "spaceform_float/boundary.hpp"
#include "spaceform_float/direction_grid.hpp"
#include "spaceform_float/errors.hpp"
#include "spaceform_float/section.hpp"
#include "spaceform_float/spaceform.hpp"

namespace spaceform {

/// Solid ellipsoid {x : (x − c)ᵀ M (x − c) <= 1}, M symmetric positive
/// definite. Balls of every space form centred anywhere in the model are
/// ellipsoids, since motions act projectively.
template <int Dim>
class Ellipsoid {
 public:
  using Point = Vec<Dim>;

  Ellipsoid(const Point& center, const Mat<Dim>& m) : c_(center), m_(0.5 * (m + m.transpose())) {
    if (!c_.allFinite() || !m_.allFinite()) throw PreconditionError("Ellipsoid: non-finite data");
    Eigen::LLT<Mat<Dim>> llt(m_);
    if (llt.info() != Eigen::Success) {
      throw PreconditionError("Ellipsoid: shape matrix is not positive definite");
    }
    minv_ = llt.solve(Mat<Dim>::Identity());
    minv_ = 0.5 * (minv_ + minv_.transpose());
    det_minv_ = minv_.determinant();
  }

  static Ellipsoid axis_aligned(const Point& semiaxes, const Point& center = Point::Zero()) {
    for (int i = 0; i < Dim; ++i) {
      if (!(semiaxes[i] > 0.0)) throw PreconditionError("Ellipsoid: semiaxes must be positive");
    }
    Mat<Dim> m = Mat<Dim>::Zero();
    for (int i = 0; i < Dim; ++i) m(i, i) = 1.0 / (semiaxes[i] * semiaxes[i]);
    return Ellipsoid(center, m);
  }

  /// Euclidean ball.
  static Ellipsoid ball(double radius, const Point& center = Point::Zero()) {
    if (!(radius > 0.0)) throw PreconditionError("Ellipsoid: radius must be positive");
    return Ellipsoid(center, Mat<Dim>::Identity() / (radius * radius));
  }

  /// Geodesic ball B_λ(p, α) of the model.
  static Ellipsoid geodesic_ball(const SpaceForm<Dim>& space, const Point& p, double alpha) {
    space.require_inside(p, "geodesic_ball");
    const Ellipsoid centred = ball(tan_lambda(alpha, space.lambda()));
    if (p.squaredNorm() == 0.0) return centred;
    return centred.projective_image(space.translation_matrix(p));
  }

  const Point& center() const { return c_; }
  const Mat<Dim>& shape() const { return m_; }

  double support(const Point& v) const { return c_.dot(v) + std::sqrt(v.dot(minv_ * v)); }

  /// Boundary point with outer normal v (unit).
  Point support_point(const Point& v) const { return c_ + minv_ * v / std::sqrt(v.dot(minv_ * v)); }

  /// Gauss–Kronecker curvature at the boundary point with normal v.
  double curvature(const Point& v) const {
    return std::pow(v.dot(minv_ * v), 0.5 * (Dim + 1)) / det_minv_;
  }

  bool contains(const Point& x, double tol = 0.0) const {
    const Point d = x - c_;
    return d.dot(m_ * d) <= 1.0 + tol;
  }

  /// Distance from the origin to bd K along the unit ray u (origin interior).
  double radial(const Point& u) const {
    const double a = u.dot(m_ * u);
    const double b = u.dot(m_ * c_);
    const double c = c_.dot(m_ * c_) - 1.0;
    if (!(c < 0.0)) throw PreconditionError("Ellipsoid::radial: origin is not interior");
    return (b + std::sqrt(b * b - a * c)) / a;
  }

  /// Largest Euclidean norm over the body (upper bound).
  double bounding_radius() const {
    Eigen::SelfAdjointEigenSolver<Mat<Dim>> es(minv_);
    return c_.norm() + std::sqrt(es.eigenvalues().maxCoeff());
  }

  double volume() const {
    return std::pow(std::numbers::pi, 0.5 * Dim) / std::tgamma(0.5 * Dim + 1.0) * std::sqrt(det_minv_);
  }

  std::vector<double> breakpoints(const Point&) const { return {}; }

  /// λ-mass of the section {x·v = t}; d_top = h(v) − t and d_bot = t + h(−v)
  /// are passed separately so thin caps keep full relative precision.
  double section_mass(const Point& v, double t, double d_top, double d_bot, double lambda) const {
    if (!(d_top > 0.0) || !(d_bot > 0.0)) return 0.0;
    const double width = d_top + d_bot;
    const double t_mid = t + 0.5 * (d_top - d_bot);
    const double kappa = section_radius2(v, t_mid) / (0.25 * width * width);
    const double r2 = kappa * d_top * d_bot;
    if constexpr (Dim == 2) {
      const Point w = perp(v);
      const double a = w.dot(m_ * w);
      const double y0 = -w.dot(m_ * (t * v - c_)) / a;
      const double half = std::sqrt(r2 / a);
      return chord_mass(t, Chord{y0 - half, y0 + half}, lambda);
    } else {
      const auto [w1, w2] = orthonormal_complement(v);
      Eigen::Matrix<double, 3, 2> w;
      w.col(0) = w1;
      w.col(1) = w2;
      const Mat<2> a2 = w.transpose() * m_ * w;
      const Vec<2> b2 = w.transpose() * m_ * (t * v - c_);
      const Vec<2> y0 = -a2.ldlt().solve(b2);
      return ellipse_section_mass(t, y0, a2, r2, lambda);
    }
  }

  /// 2D only: the chord {x·v = t} ∩ K in the coordinate along perp(v).
  Chord chord(const Point& v, double t, double d_top, double d_bot) const
    requires(Dim == 2)
  {
    if (!(d_top >= 0.0) || !(d_bot >= 0.0)) return {0.0, 0.0};
    const double width = d_top + d_bot;
    const double t_mid = t + 0.5 * (d_top - d_bot);
    const double kappa = section_radius2(v, t_mid) / (0.25 * width * width);
    const Point w = perp(v);
    const double a = w.dot(m_ * w);
    const double y0 = -w.dot(m_ * (t * v - c_)) / a;
    const double half = std::sqrt(std::max(0.0, kappa * d_top * d_bot) / a);
    return {y0 - half, y0 + half};
  }

  /// Nodes from the Gauss map: normals on the direction grid, weight dσ/H^e.
  BoundaryQuadrature<Dim> boundary_quadrature(int resolution, double phase = 0.0) const {
    DirectionGrid<Dim> g;
    if constexpr (Dim == 2) {
      g = circle_grid(resolution, phase);
    } else {
      g = icosphere_grid(icosphere_level_for(resolution));
    }
    BoundaryQuadrature<Dim> q;
    q.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Point& v = g.dirs[i];
      const double k = curvature(v);
      q.push_back({support_point(v), v, k, g.weights[i] / k});
    }
    return q;
  }

  /// Image under the projective map x ↦ H(x, 1). Quadrics map to quadrics;
  /// throws if the image is not a bounded ellipsoid.
  Ellipsoid projective_image(const Homogeneous<Dim>& h) const {
    Homogeneous<Dim> q;
    q.template topLeftCorner<Dim, Dim>() = m_;
    q.template topRightCorner<Dim, 1>() = -m_ * c_;
    q.template bottomLeftCorner<1, Dim>() = -(m_ * c_).transpose();
    q(Dim, Dim) = c_.dot(m_ * c_) - 1.0;
    const Homogeneous<Dim> hinv = h.inverse();
    Homogeneous<Dim> qq = hinv.transpose() * q * hinv;
    const Mat<Dim> a = qq.template topLeftCorner<Dim, Dim>();
    const Vec<Dim> b = qq.template topRightCorner<Dim, 1>();
    const double c0 = qq(Dim, Dim);
    Eigen::LLT<Mat<Dim>> llt(a);
    if (llt.info() != Eigen::Success) {
      throw DomainError("Ellipsoid::projective_image: image is not bounded");
    }
    const Vec<Dim> center = -llt.solve(b);
    const double scale = b.dot(llt.solve(b)) - c0;
    if (!(scale > 0.0)) throw DomainError("Ellipsoid::projective_image: degenerate image");
    return Ellipsoid(center, a / scale);
  }

  Ellipsoid linear_image(const Mat<Dim>& a) const { return projective_image(linear_homogeneous<Dim>(a)); }

 private:
  // Squared radius of the section {x·v = t}, in the metric of the section's
  // own quadratic form. Quadratic in t with roots at the two support heights.
  double section_radius2(const Point& v, double t) const {
    const Point p = t * v - c_;
    const double c = p.dot(m_ * p) - 1.0;
    if constexpr (Dim == 2) {
      const Point w = perp(v);
      const double a = w.dot(m_ * w);
      const double b = w.dot(m_ * p);
      return b * b / a - c;
    } else {
      const auto [w1, w2] = orthonormal_complement(v);
      Eigen::Matrix<double, 3, 2> w;
      w.col(0) = w1;
      w.col(1) = w2;
      const Mat<2> a2 = w.transpose() * m_ * w;
      const Vec<2> b2 = w.transpose() * m_ * p;
      return b2.dot(a2.ldlt().solve(b2)) - c;
    }
  }

  Point c_;
  Mat<Dim> m_;
  Mat<Dim> minv_;
  double det_minv_ = 1.0;
};

}  // namespace spaceform
