#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include "spaceform_float/boundary.hpp"
#include "spaceform_float/ellipsoid.hpp"
#include "spaceform_float/errors.hpp"
#include "spaceform_float/polytope.hpp"
#include "spaceform_float/quadrature.hpp"
#include "spaceform_float/section.hpp"
#include "spaceform_float/smooth2d.hpp"

namespace spaceform {

/// Smooth strictly convex planar body parametrised by the normal angle.
class SmoothBase {
 public:
  using Point = Vec<2>;
  using Variant = std::variant<Ellipsoid<2>, Smooth2D>;

  SmoothBase(Variant b) : b_(std::move(b)) {}  // NOLINT(google-explicit-constructor)

  const Variant& variant() const { return b_; }

  double support(const Point& v) const {
    return std::visit([&](const auto& b) { return b.support(v); }, b_);
  }
  Point point(double th) const {
    const Point u(std::cos(th), std::sin(th));
    if (const auto* e = std::get_if<Ellipsoid<2>>(&b_)) return e->support_point(u);
    return std::get<Smooth2D>(b_).point(th);
  }
  double rho(double th) const {
    const Point u(std::cos(th), std::sin(th));
    if (const auto* e = std::get_if<Ellipsoid<2>>(&b_)) return 1.0 / e->curvature(u);
    return std::get<Smooth2D>(b_).rho(th);
  }
  /// Normal angle of a boundary point x.
  double normal_angle(const Point& x) const {
    if (const auto* e = std::get_if<Ellipsoid<2>>(&b_)) {
      const Point g = e->shape() * (x - e->center());
      return std::atan2(g[1], g[0]);
    }
    return std::get<Smooth2D>(b_).theta_of_ray(std::atan2(x[1], x[0]));
  }
  Chord chord(const Point& v, double t, double d_top, double d_bot) const {
    return std::visit([&](const auto& b) { return b.chord(v, t, d_top, d_bot); }, b_);
  }
  double radial(const Point& u) const {
    return std::visit([&](const auto& b) { return b.radial(u); }, b_);
  }
  bool contains(const Point& x, double tol) const {
    return std::visit([&](const auto& b) { return b.contains(x, tol); }, b_);
  }
  double bounding_radius() const {
    return std::visit([&](const auto& b) { return b.bounding_radius(); }, b_);
  }

 private:
  Variant b_;
};

/// A smooth planar body cut by finitely many half-planes n·x <= b. Used for
/// valuation checks, where K, L, K∪L and K∩L must all be representable.
class Clipped2D {
 public:
  using Point = Vec<2>;

  Clipped2D(SmoothBase base, std::vector<Halfspace<2>> cuts) : base_(std::move(base)), cuts_(std::move(cuts)) {
    for (auto& c : cuts_) {
      const double len = c.normal.norm();
      if (!(len > 0.0)) throw PreconditionError("Clipped2D: zero cut normal");
      c.normal /= len;
      c.offset /= len;
    }
    build();
  }

  const SmoothBase& base() const { return base_; }
  const std::vector<Halfspace<2>>& cuts() const { return cuts_; }
  const std::vector<Point>& vertices() const { return vertices_; }

  bool contains(const Point& x, double tol = 0.0) const {
    for (const auto& c : cuts_) {
      if (c.normal.dot(x) > c.offset + tol) return false;
    }
    return base_.contains(x, tol);
  }

  double support(const Point& v) const {
    double best = -std::numeric_limits<double>::infinity();
    const Point p = base_.point(std::atan2(v[1], v[0]));
    if (cuts_ok(p, 1e-12)) best = p.dot(v);
    for (const auto& q : vertices_) best = std::max(best, q.dot(v));
    return best;
  }

  double radial(const Point& u) const {
    double r = base_.radial(u);
    for (const auto& c : cuts_) {
      const double nu = c.normal.dot(u);
      if (nu > 0.0) r = std::min(r, c.offset / nu);
    }
    if (!(r > 0.0)) throw PreconditionError("Clipped2D::radial: origin is not interior");
    return r;
  }

  double bounding_radius() const { return base_.bounding_radius(); }

  std::vector<double> breakpoints(const Point& v) const {
    std::vector<double> t;
    for (const auto& q : vertices_) t.push_back(q.dot(v));
    return t;
  }

  Chord chord(const Point& v, double t, double d_top, double d_bot) const {
    const Point w = perp(v);
    const double top = support(v);
    const double bot = support(-v);
    const double bt = base_.support(v) - top + d_top;
    const double bb = base_.support(-v) - bot + d_bot;
    Chord c = base_.chord(v, t, bt, bb);
    if (!(c.s1 > c.s0)) return {0.0, 0.0};
    for (const auto& cut : cuts_) {
      const double nv = cut.normal.dot(v);
      const double nw = cut.normal.dot(w);
      const double rhs = cut.offset - nv * t;
      if (std::abs(nw) < 1e-15) {
        if (rhs < 0.0) return {0.0, 0.0};
        continue;
      }
      const double s = rhs / nw;
      if (nw > 0.0) c.s1 = std::min(c.s1, s);
      else c.s0 = std::max(c.s0, s);
    }
    if (!(c.s1 > c.s0)) return {0.0, 0.0};
    return c;
  }

  double section_mass(const Point& v, double t, double d_top, double d_bot, double lambda) const {
    return chord_mass(t, chord(v, t, d_top, d_bot), lambda);
  }

  /// Composite Gauss–Legendre on the surviving arcs (in the normal angle)
  /// and midpoint nodes on the cut segments.
  BoundaryQuadrature<2> boundary_quadrature(int resolution, double phase = 0.5) const {
    BoundaryQuadrature<2> q;
    const int order = 8;
    const GaussRule& g = gauss_legendre(order);
    for (const auto& arc : arcs_) {
      const double span = arc.second - arc.first;
      const int panels = std::max(1, static_cast<int>(std::ceil(resolution * span / (2.0 * std::numbers::pi) / order)));
      const double hp = span / panels;
      for (int p = 0; p < panels; ++p) {
        const double a = arc.first + p * hp;
        for (int i = 0; i < order; ++i) {
          const double th = a + 0.5 * hp * (g.nodes[i] + 1.0);
          const double r = base_.rho(th);
          q.push_back({base_.point(th), Point(std::cos(th), std::sin(th)), 1.0 / r, 0.5 * hp * g.weights[i] * r});
        }
      }
    }
    double per = 0.0;
    for (const auto& s : segments_) per += (s.b - s.a).norm();
    for (const auto& arc : arcs_) per += arc_length(arc.first, arc.second);
    for (const auto& s : segments_) {
      const double len = (s.b - s.a).norm();
      const int c = std::max(1, static_cast<int>(std::lround(resolution * len / per)));
      for (int k = 0; k < c; ++k) {
        q.push_back({s.a + ((k + phase) / c) * (s.b - s.a), s.normal, 0.0, len / c});
      }
    }
    return q;
  }

  /// Normal-angle intervals of bd(base) that survive the cuts.
  const std::vector<std::pair<double, double>>& arcs() const { return arcs_; }

 private:
  struct Segment {
    Point a, b, normal;
  };

  bool cuts_ok(const Point& x, double tol, int skip = -1) const {
    for (std::size_t j = 0; j < cuts_.size(); ++j) {
      if (static_cast<int>(j) == skip) continue;
      if (cuts_[j].normal.dot(x) > cuts_[j].offset + tol) return false;
    }
    return true;
  }

  double arc_length(double a, double b) const {
    return gauss_legendre_integrate([&](double th) { return base_.rho(th); }, a, b, 32);
  }

  void build() {
    const double scale = std::max(1.0, base_.bounding_radius());
    const double tol = 1e-12 * scale;
    std::vector<double> corner_angles;
    // Corners on the smooth boundary.
    for (std::size_t j = 0; j < cuts_.size(); ++j) {
      const Point& n = cuts_[j].normal;
      const double b = cuts_[j].offset;
      const double top = base_.support(n);
      const double bot = base_.support(-n);
      if (b >= top || b <= -bot) continue;
      const Chord c = base_.chord(n, b, top - b, b + bot);
      const Point w = perp(n);
      for (double s : {c.s0, c.s1}) {
        const Point x = b * n + s * w;
        if (cuts_ok(x, tol, static_cast<int>(j))) {
          vertices_.push_back(x);
          corner_angles.push_back(base_.normal_angle(x));
        }
      }
    }
    // Corners between two cut lines.
    for (std::size_t i = 0; i < cuts_.size(); ++i) {
      for (std::size_t j = i + 1; j < cuts_.size(); ++j) {
        Mat<2> a;
        a.row(0) = cuts_[i].normal.transpose();
        a.row(1) = cuts_[j].normal.transpose();
        if (std::abs(a.determinant()) < 1e-14) continue;
        const Point x = a.inverse() * Point(cuts_[i].offset, cuts_[j].offset);
        if (base_.contains(x, tol) && cuts_ok(x, tol, -1)) vertices_.push_back(x);
      }
    }
    if (corner_angles.empty()) {
      if (!cuts_ok(base_.point(0.0), tol)) {
        throw PreconditionError("Clipped2D: cuts leave an empty or degenerate body");
      }
      arcs_.push_back({0.0, 2.0 * std::numbers::pi});
    } else {
      for (double& a : corner_angles) a = std::fmod(a + 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
      std::sort(corner_angles.begin(), corner_angles.end());
      const std::size_t m = corner_angles.size();
      for (std::size_t i = 0; i < m; ++i) {
        const double a = corner_angles[i];
        double b = corner_angles[(i + 1) % m];
        if (i + 1 == m) b += 2.0 * std::numbers::pi;
        if (!(b - a > 1e-13)) continue;
        if (cuts_ok(base_.point(0.5 * (a + b)), tol)) arcs_.push_back({a, b});
      }
    }
    // Cut segments: the part of each cut line inside the body.
    for (std::size_t j = 0; j < cuts_.size(); ++j) {
      const Point& n = cuts_[j].normal;
      const double b = cuts_[j].offset;
      const double top = base_.support(n);
      const double bot = base_.support(-n);
      if (b >= top || b <= -bot) continue;
      Chord c = base_.chord(n, b, top - b, b + bot);
      const Point w = perp(n);
      for (std::size_t k = 0; k < cuts_.size(); ++k) {
        if (k == j) continue;
        const double nv = cuts_[k].normal.dot(n);
        const double nw = cuts_[k].normal.dot(w);
        const double rhs = cuts_[k].offset - nv * b;
        if (std::abs(nw) < 1e-15) {
          if (rhs < 0.0) c = {0.0, 0.0};
          continue;
        }
        if (nw > 0.0) c.s1 = std::min(c.s1, rhs / nw);
        else c.s0 = std::max(c.s0, rhs / nw);
      }
      if (c.s1 - c.s0 > tol) segments_.push_back({b * n + c.s1 * w, b * n + c.s0 * w, n});
    }
    if (arcs_.empty() && segments_.size() < 3) {
      throw PreconditionError("Clipped2D: cuts leave an empty or degenerate body");
    }
  }

  SmoothBase base_;
  std::vector<Halfspace<2>> cuts_;
  std::vector<Point> vertices_;
  std::vector<std::pair<double, double>> arcs_;
  std::vector<Segment> segments_;
};

}  // namespace spaceform
