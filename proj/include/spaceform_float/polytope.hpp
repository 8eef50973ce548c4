#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "spaceform_float/boundary.hpp"
#include "spaceform_float/direction_grid.hpp"
#include "spaceform_float/errors.hpp"
#include "spaceform_float/quadrature.hpp"
#include "spaceform_float/section.hpp"
#include "spaceform_float/spaceform.hpp"

namespace spaceform {

template <int Dim>
struct Halfspace {
  Vec<Dim> normal;  // unit
  double offset = 0.0;
};

template <int Dim>
class Polytope;

namespace detail {

inline double cross2(const Vec<2>& a, const Vec<2>& b) { return a[0] * b[1] - a[1] * b[0]; }

inline double angle_of(const Vec<2>& v) { return std::atan2(v[1], v[0]); }

/// Andrew's monotone chain; returns the hull counter-clockwise without
/// collinear points.
inline std::vector<Vec<2>> convex_hull(std::vector<Vec<2>> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec<2>& a, const Vec<2>& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec<2>> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross2(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

// Half-plane {x : cross(d, x − p) >= 0}, i.e. n·x <= f with d = perp(n).
struct HalfPlane {
  Vec<2> p;
  Vec<2> d;
  Vec<2> n;
  double f;
  double angle;
  bool out(const Vec<2>& x, double eps) const { return cross2(d, x - p) < -eps; }
};

inline Vec<2> intersect(const HalfPlane& s, const HalfPlane& t) {
  const double alpha = cross2(t.p - s.p, t.d) / cross2(s.d, t.d);
  return s.p + alpha * s.d;
}

}  // namespace detail

/// Convex polygon, vertices counter-clockwise; edge i joins vertex i to i+1
/// and carries the outer unit normal normals[i] with offset offsets[i].
template <>
class Polytope<2> {
 public:
  using Point = Vec<2>;

  static Polytope from_vertices(const std::vector<Point>& pts) {
    std::vector<Point> hull = detail::convex_hull(pts);
    if (hull.size() < 3) throw PreconditionError("Polytope: vertices do not span the plane");
    return Polytope(std::move(hull));
  }

  /// Intersection of half-planes n·x <= b (normals need not be unit). Throws
  /// EmptyWulff if empty or degenerate and PreconditionError if unbounded.
  static Polytope from_halfspaces(const std::vector<Halfspace<2>>& hs) {
    auto r = halfplane_intersection(hs);
    if (!r) throw EmptyWulff("Polytope: halfspace intersection is empty");
    return *r;
  }

  static std::optional<Polytope> halfplane_intersection(const std::vector<Halfspace<2>>& hs_in) {
    if (hs_in.size() < 3) throw PreconditionError("Polytope: need at least 3 halfspaces");
    double scale = 1.0;
    std::vector<detail::HalfPlane> hp;
    hp.reserve(hs_in.size() + 4);
    for (const auto& h : hs_in) {
      const double len = h.normal.norm();
      if (!(len > 0.0) || !std::isfinite(h.offset)) {
        throw PreconditionError("Polytope: invalid halfspace");
      }
      const Point n = h.normal / len;
      const double f = h.offset / len;
      scale = std::max(scale, std::abs(f));
      const Point d = perp(n);
      hp.push_back({f * n, d, n, f, detail::angle_of(d)});
    }
    const double box = 1e3 * scale;
    const std::size_t n_real = hp.size();
    for (int k = 0; k < 4; ++k) {
      const double th = 0.5 * std::numbers::pi * k;
      const Point n(std::cos(th), std::sin(th));
      const Point d = perp(n);
      hp.push_back({box * n, d, n, box, detail::angle_of(d)});
    }
    std::vector<std::size_t> order(hp.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return hp[a].angle < hp[b].angle; });
    const double eps = 1e-12 * scale;
    std::deque<std::size_t> dq;
    for (std::size_t idx : order) {
      const auto& h = hp[idx];
      while (dq.size() > 1 && h.out(detail::intersect(hp[dq[dq.size() - 1]], hp[dq[dq.size() - 2]]), eps)) {
        dq.pop_back();
      }
      while (dq.size() > 1 && h.out(detail::intersect(hp[dq[0]], hp[dq[1]]), eps)) dq.pop_front();
      if (!dq.empty() && std::abs(detail::cross2(h.d, hp[dq.back()].d)) < 1e-14) {
        if (h.d.dot(hp[dq.back()].d) < 0.0) return std::nullopt;
        if (h.out(hp[dq.back()].p, 0.0)) {
          dq.pop_back();
        } else {
          continue;
        }
      }
      dq.push_back(idx);
    }
    while (dq.size() > 2 && hp[dq[0]].out(detail::intersect(hp[dq[dq.size() - 1]], hp[dq[dq.size() - 2]]), eps)) {
      dq.pop_back();
    }
    while (dq.size() > 2 && hp[dq.back()].out(detail::intersect(hp[dq[0]], hp[dq[1]]), eps)) dq.pop_front();
    if (dq.size() < 3) return std::nullopt;

    std::vector<Point> verts;
    std::vector<Point> normals;
    std::vector<double> offsets;
    bool touches_box = false;
    const std::size_t m = dq.size();
    for (std::size_t i = 0; i < m; ++i) {
      // Vertex i is the start of edge i (line dq[i]).
      const auto& prev = hp[dq[(i + m - 1) % m]];
      const auto& cur = hp[dq[i]];
      if (dq[i] >= n_real) touches_box = true;
      verts.push_back(detail::intersect(prev, cur));
      normals.push_back(cur.n);
      offsets.push_back(cur.f);
    }
    // Drop zero-length edges.
    std::vector<Point> v2, n2;
    std::vector<double> o2;
    for (std::size_t i = 0; i < m; ++i) {
      const Point& a = verts[i];
      const Point& b = verts[(i + 1) % m];
      if ((b - a).norm() <= 1e-14 * scale) continue;
      v2.push_back(a);
      n2.push_back(normals[i]);
      o2.push_back(offsets[i]);
    }
    if (v2.size() < 3) return std::nullopt;
    Polytope poly(std::move(v2), std::move(n2), std::move(o2));
    if (!(poly.area() > 1e-14 * scale * scale)) return std::nullopt;
    // Deque output is only trusted after an explicit feasibility check.
    const double tol = 1e-9 * scale;
    for (std::size_t i = 0; i < n_real; ++i) {
      if (poly.support(hp[i].n) > hp[i].f + tol) return std::nullopt;
    }
    if (touches_box) throw PreconditionError("Polytope: halfspace intersection is unbounded");
    return poly;
  }

  const std::vector<Point>& vertices() const { return v_; }
  const std::vector<Point>& normals() const { return n_; }
  const std::vector<double>& offsets() const { return b_; }
  std::size_t size() const { return v_.size(); }

  std::vector<Halfspace<2>> halfspaces() const {
    std::vector<Halfspace<2>> hs;
    for (std::size_t i = 0; i < n_.size(); ++i) hs.push_back({n_[i], b_[i]});
    return hs;
  }

  double area() const {
    double a = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) a += detail::cross2(v_[i], v_[(i + 1) % v_.size()]);
    return 0.5 * a;
  }

  double perimeter() const {
    double p = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) p += (v_[(i + 1) % v_.size()] - v_[i]).norm();
    return p;
  }

  double support(const Point& v) const {
    const std::size_t m = v_.size();
    if (m <= 32) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& p : v_) best = std::max(best, p.dot(v));
      return best;
    }
    // Vertex j+1 maximises x·v for normal angles in [α_j, α_{j+1}].
    const std::size_t k = locate(normal_angles_, detail::angle_of(v));
    const std::size_t j = (normal_start_ + k) % m;
    double best = -std::numeric_limits<double>::infinity();
    for (int d = -1; d <= 2; ++d) best = std::max(best, v_[(j + m + d) % m].dot(v));
    return best;
  }

  bool contains(const Point& x, double tol = 0.0) const {
    for (std::size_t i = 0; i < n_.size(); ++i) {
      if (n_[i].dot(x) > b_[i] + tol) return false;
    }
    return true;
  }

  double radial(const Point& u) const {
    const std::size_t m = v_.size();
    if (m <= 32 || vertex_angles_.empty()) {
      double r = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        const double nu = n_[i].dot(u);
        if (nu > 0.0) r = std::min(r, b_[i] / nu);
      }
      if (!std::isfinite(r) || !(r > 0.0)) throw PreconditionError("Polytope::radial: origin is not interior");
      return r;
    }
    // The ray leaves through the edge starting at the vertex preceding it.
    const std::size_t k = locate(vertex_angles_, detail::angle_of(u));
    const std::size_t j = (vertex_start_ + k) % m;
    double r = std::numeric_limits<double>::infinity();
    for (int d = -1; d <= 1; ++d) {
      const std::size_t e = (j + m + d) % m;
      const double nu = n_[e].dot(u);
      if (nu > 0.0) r = std::min(r, b_[e] / nu);
    }
    return r;
  }

  double bounding_radius() const {
    double r = 0.0;
    for (const auto& p : v_) r = std::max(r, p.norm());
    return r;
  }

  std::vector<double> breakpoints(const Point& v) const {
    std::vector<double> t;
    t.reserve(v_.size());
    for (const auto& p : v_) t.push_back(p.dot(v));
    return t;
  }

  Chord chord(const Point& v, double /*t*/, double d_top, double /*d_bot*/) const {
    const Point w = perp(v);
    const double h = support(v);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_.size(); ++i) {
      const double nv = n_[i].dot(v);
      const double nw = n_[i].dot(w);
      const double rhs = (b_[i] - nv * h) + nv * d_top;
      if (std::abs(nw) < 1e-15) {
        if (rhs < 0.0) return {0.0, 0.0};
        continue;
      }
      const double s = rhs / nw;
      if (nw > 0.0) hi = std::min(hi, s);
      else lo = std::max(lo, s);
    }
    if (!(hi > lo)) return {0.0, 0.0};
    return {lo, hi};
  }

  double section_mass(const Point& v, double t, double d_top, double d_bot, double lambda) const {
    return chord_mass(t, chord(v, t, d_top, d_bot), lambda);
  }

  /// Composite midpoint nodes on the edges; curvature vanishes on facets.
  BoundaryQuadrature<2> boundary_quadrature(int resolution, double phase = 0.5) const {
    const double per = perimeter();
    BoundaryQuadrature<2> q;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      const Point& a = v_[i];
      const Point& b = v_[(i + 1) % v_.size()];
      const double len = (b - a).norm();
      const int c = std::max(1, static_cast<int>(std::lround(resolution * len / per)));
      for (int k = 0; k < c; ++k) {
        const double s = (k + phase) / c;
        q.push_back({a + s * (b - a), n_[i], 0.0, len / c});
      }
    }
    return q;
  }

 private:
  explicit Polytope(std::vector<Point> ccw) : v_(std::move(ccw)) {
    const std::size_t m = v_.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Point e = v_[(i + 1) % m] - v_[i];
      const Point n = Point(e[1], -e[0]).normalized();
      n_.push_back(n);
      b_.push_back(n.dot(v_[i]));
    }
    build_index();
  }

  Polytope(std::vector<Point> v, std::vector<Point> n, std::vector<double> b)
      : v_(std::move(v)), n_(std::move(n)), b_(std::move(b)) {
    build_index();
  }

  // Sorted (unwrapped) angle tables for logarithmic support/radial queries.
  void build_index() {
    const std::size_t m = v_.size();
    if (m <= 32) return;
    auto unwrap = [m](const std::vector<double>& raw, std::vector<double>& out, std::size_t& start) {
      // Steps are taken in (−π, π] and clamped at zero, so reversed sliver
      // edges (rounding-level backsteps) keep the table sorted.
      start = 0;
      out.resize(m);
      out[0] = raw[0];
      for (std::size_t k = 1; k < m; ++k) {
        const double step = std::remainder(raw[k] - raw[k - 1], 2.0 * std::numbers::pi);
        out[k] = out[k - 1] + std::max(0.0, step);
      }
    };
    std::vector<double> na(m), va(m);
    bool origin_inside = true;
    for (std::size_t i = 0; i < m; ++i) {
      na[i] = detail::angle_of(n_[i]);
      va[i] = detail::angle_of(v_[i]);
      if (!(b_[i] > 0.0)) origin_inside = false;
    }
    unwrap(na, normal_angles_, normal_start_);
    if (origin_inside) unwrap(va, vertex_angles_, vertex_start_);
  }

  static std::size_t locate(const std::vector<double>& angles, double phi) {
    const double a0 = angles.front();
    while (phi < a0) phi += 2.0 * std::numbers::pi;
    while (phi >= a0 + 2.0 * std::numbers::pi) phi -= 2.0 * std::numbers::pi;
    const auto it = std::upper_bound(angles.begin(), angles.end(), phi);
    return static_cast<std::size_t>(it - angles.begin()) - 1;
  }

  std::vector<Point> v_;
  std::vector<Point> n_;
  std::vector<double> b_;
  std::vector<double> normal_angles_;
  std::size_t normal_start_ = 0;
  std::vector<double> vertex_angles_;
  std::size_t vertex_start_ = 0;
};

/// Convex polyhedron: vertices plus facets (outer unit normal, offset,
/// vertex loop counter-clockwise seen from outside).
template <>
class Polytope<3> {
 public:
  using Point = Vec<3>;

  struct Face {
    Point normal;
    double offset = 0.0;
    std::vector<int> loop;
    int source = -1;  // index of the generating halfspace, -1 for the bounding box
  };

  static Polytope from_halfspaces(const std::vector<Halfspace<3>>& hs) {
    auto r = halfspace_intersection(hs);
    if (!r) throw EmptyWulff("Polytope: halfspace intersection is empty");
    return *r;
  }

  /// Incremental clipping of a bounding cube; nullopt when empty.
  static std::optional<Polytope> halfspace_intersection(const std::vector<Halfspace<3>>& hs) {
    if (hs.size() < 4) throw PreconditionError("Polytope: need at least 4 halfspaces");
    double scale = 1.0;
    for (const auto& h : hs) {
      if (!(h.normal.norm() > 0.0) || !std::isfinite(h.offset)) {
        throw PreconditionError("Polytope: invalid halfspace");
      }
      scale = std::max(scale, std::abs(h.offset / h.normal.norm()));
    }
    Polytope p = cube(1e3 * scale);
    const double eps = 1e-12 * scale;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const double len = hs[i].normal.norm();
      if (!p.clip(hs[i].normal / len, hs[i].offset / len, static_cast<int>(i), eps)) return std::nullopt;
    }
    for (const auto& f : p.faces_) {
      if (f.source < 0) throw PreconditionError("Polytope: halfspace intersection is unbounded");
    }
    if (!(p.volume() > 1e-14 * scale * scale * scale)) return std::nullopt;
    return p;
  }

  /// Convex hull of a small point set (facet enumeration over triples).
  static Polytope from_vertices(const std::vector<Point>& pts) {
    if (pts.size() < 4) throw PreconditionError("Polytope: need at least 4 vertices");
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, p.norm());
    const double eps = 1e-12 * std::max(scale, 1.0);
    std::vector<Halfspace<3>> hs;
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
          Point n = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
          const double len = n.norm();
          if (len <= eps) continue;
          n /= len;
          double b = n.dot(pts[i]);
          int above = 0, below = 0;
          for (const auto& q : pts) {
            const double d = n.dot(q) - b;
            if (d > eps) ++above;
            if (d < -eps) ++below;
          }
          if (above > 0 && below > 0) continue;
          if (above > 0) {
            n = -n;
            b = -b;
          }
          bool dup = false;
          for (const auto& h : hs) {
            if ((h.normal - n).norm() < 1e-9 && std::abs(h.offset - b) < 1e-9 * std::max(scale, 1.0)) dup = true;
          }
          if (!dup) hs.push_back({n, b});
        }
      }
    }
    if (hs.size() < 4) throw PreconditionError("Polytope: vertices do not span space");
    return from_halfspaces(hs);
  }

  const std::vector<Point>& vertices() const { return v_; }
  const std::vector<Face>& faces() const { return faces_; }

  std::vector<Halfspace<3>> halfspaces() const {
    std::vector<Halfspace<3>> hs;
    for (const auto& f : faces_) hs.push_back({f.normal, f.offset});
    return hs;
  }

  double support(const Point& v) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : v_) best = std::max(best, p.dot(v));
    return best;
  }

  bool contains(const Point& x, double tol = 0.0) const {
    for (const auto& f : faces_) {
      if (f.normal.dot(x) > f.offset + tol) return false;
    }
    return true;
  }

  double radial(const Point& u) const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& f : faces_) {
      const double nu = f.normal.dot(u);
      if (nu > 0.0) r = std::min(r, f.offset / nu);
    }
    if (!std::isfinite(r) || !(r > 0.0)) throw PreconditionError("Polytope::radial: origin is not interior");
    return r;
  }

  double bounding_radius() const {
    double r = 0.0;
    for (const auto& p : v_) r = std::max(r, p.norm());
    return r;
  }

  double volume() const {
    double vol = 0.0;
    for (const auto& f : faces_) {
      const Point& a = v_[f.loop[0]];
      for (std::size_t i = 1; i + 1 < f.loop.size(); ++i) {
        vol += a.dot(v_[f.loop[i]].cross(v_[f.loop[i + 1]]));
      }
    }
    return vol / 6.0;
  }

  double surface_area() const {
    double s = 0.0;
    for (const auto& f : faces_) s += face_area(f);
    return s;
  }

  std::vector<double> breakpoints(const Point& v) const {
    std::vector<double> t;
    t.reserve(v_.size());
    for (const auto& p : v_) t.push_back(p.dot(v));
    return t;
  }

  double section_mass(const Point& v, double t, double d_top, double, double lambda) const {
    const auto [w1, w2] = orthonormal_complement(v);
    const double r = 2.0 * bounding_radius() + 1.0;
    std::vector<Vec<2>> poly = {Vec<2>(-r, -r), Vec<2>(r, -r), Vec<2>(r, r), Vec<2>(-r, r)};
    const double h = support(v);
    for (const auto& f : faces_) {
      const double nv = f.normal.dot(v);
      const Vec<2> nw(f.normal.dot(w1), f.normal.dot(w2));
      const double rhs = (f.offset - nv * h) + nv * d_top;
      if (nw.norm() < 1e-15) {
        if (rhs < 0.0) return 0.0;
        continue;
      }
      poly = clip_polygon(poly, nw, rhs);
      if (poly.size() < 3) return 0.0;
    }
    return polygon_section_mass(t, poly, lambda);
  }

  /// Collapsed Gauss nodes on a triangle fan of every facet.
  BoundaryQuadrature<3> boundary_quadrature(int resolution, double = 0.5) const {
    int tris = 0;
    for (const auto& f : faces_) tris += static_cast<int>(f.loop.size()) - 2;
    const int m = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(resolution) / tris)), 1, 16);
    const GaussRule& g = gauss_legendre(m);
    BoundaryQuadrature<3> q;
    for (const auto& f : faces_) {
      const Point& p0 = v_[f.loop[0]];
      for (std::size_t i = 1; i + 1 < f.loop.size(); ++i) {
        const Point e1 = v_[f.loop[i]] - p0;
        const Point e2 = v_[f.loop[i + 1]] - p0;
        const double jac = e1.cross(e2).norm();
        for (int a = 0; a < m; ++a) {
          const double u = 0.5 * (g.nodes[a] + 1.0);
          for (int b = 0; b < m; ++b) {
            const double w = 0.5 * (g.nodes[b] + 1.0);
            q.push_back({p0 + u * (e1 + w * (e2 - e1)), f.normal, 0.0,
                         0.25 * g.weights[a] * g.weights[b] * u * jac});
          }
        }
      }
    }
    return q;
  }

  /// The axis-aligned cube [-r, r]³.
  static Polytope cube(double r) {
    Polytope p;
    for (int i = 0; i < 8; ++i) {
      p.v_.emplace_back((i & 1) ? r : -r, (i & 2) ? r : -r, (i & 4) ? r : -r);
    }
    auto face = [&](Point n, std::vector<int> loop) { p.faces_.push_back({n, r, std::move(loop), -1}); };
    face(Point(-1, 0, 0), {0, 4, 6, 2});
    face(Point(1, 0, 0), {1, 3, 7, 5});
    face(Point(0, -1, 0), {0, 1, 5, 4});
    face(Point(0, 1, 0), {2, 6, 7, 3});
    face(Point(0, 0, -1), {0, 2, 3, 1});
    face(Point(0, 0, 1), {4, 5, 7, 6});
    return p;
  }

 private:
  Polytope() = default;

  double face_area(const Face& f) const {
    Point s = Point::Zero();
    for (std::size_t i = 0; i < f.loop.size(); ++i) {
      s += v_[f.loop[i]].cross(v_[f.loop[(i + 1) % f.loop.size()]]);
    }
    return 0.5 * std::abs(s.dot(f.normal));
  }

  // Clips by n·x <= b. Returns false if nothing remains.
  bool clip(const Point& n, double b, int source, double eps) {
    std::vector<double> d(v_.size());
    bool any_out = false, any_in = false;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      d[i] = n.dot(v_[i]) - b;
      if (d[i] > eps) any_out = true;
      if (d[i] < -eps) any_in = true;
    }
    if (!any_out) return true;
    if (!any_in) return false;

    std::vector<Point> nv;
    std::vector<int> remap(v_.size(), -1);
    std::vector<int> on_plane;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (d[i] <= eps) {
        remap[i] = static_cast<int>(nv.size());
        nv.push_back(v_[i]);
        if (d[i] >= -eps) on_plane.push_back(remap[i]);
      }
    }
    std::map<std::pair<int, int>, int> cut;
    auto crossing = [&](int a, int c) {
      const auto key = std::minmax(a, c);
      auto it = cut.find(key);
      if (it != cut.end()) return it->second;
      const double t = d[a] / (d[a] - d[c]);
      nv.push_back(v_[a] + t * (v_[c] - v_[a]));
      const int idx = static_cast<int>(nv.size()) - 1;
      cut.emplace(key, idx);
      on_plane.push_back(idx);
      return idx;
    };
    std::vector<Face> nf;
    for (const auto& f : faces_) {
      std::vector<int> loop;
      const std::size_t m = f.loop.size();
      for (std::size_t k = 0; k < m; ++k) {
        const int a = f.loop[k];
        const int c = f.loop[(k + 1) % m];
        if (d[a] <= eps) loop.push_back(remap[a]);
        if ((d[a] < -eps && d[c] > eps) || (d[a] > eps && d[c] < -eps)) loop.push_back(crossing(a, c));
      }
      std::vector<int> clean;
      for (int idx : loop) {
        if (clean.empty() || clean.back() != idx) clean.push_back(idx);
      }
      while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
      if (clean.size() >= 3) nf.push_back({f.normal, f.offset, std::move(clean), f.source});
    }
    std::sort(on_plane.begin(), on_plane.end());
    on_plane.erase(std::unique(on_plane.begin(), on_plane.end()), on_plane.end());
    if (on_plane.size() >= 3) {
      Point c = Point::Zero();
      for (int idx : on_plane) c += nv[idx];
      c /= static_cast<double>(on_plane.size());
      const auto [w1, w2] = orthonormal_complement(n);
      std::vector<std::pair<double, int>> ang;
      for (int idx : on_plane) {
        const Point r = nv[idx] - c;
        ang.emplace_back(std::atan2(r.dot(w2), r.dot(w1)), idx);
      }
      std::sort(ang.begin(), ang.end());
      std::vector<int> loop;
      for (const auto& a : ang) loop.push_back(a.second);
      // (w1, w2, n) is right-handed, so increasing angle is CCW seen from outside.
      nf.push_back({n, b, std::move(loop), source});
    }
    // Compact away unused vertices.
    std::vector<int> used(nv.size(), -1);
    std::vector<Point> cv;
    for (auto& f : nf) {
      for (int& idx : f.loop) {
        if (used[idx] < 0) {
          used[idx] = static_cast<int>(cv.size());
          cv.push_back(nv[idx]);
        }
        idx = used[idx];
      }
    }
    v_ = std::move(cv);
    faces_ = std::move(nf);
    return faces_.size() >= 4;
  }

  std::vector<Point> v_;
  std::vector<Face> faces_;
};

}  // namespace spaceform
