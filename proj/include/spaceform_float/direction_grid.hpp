#pragma once

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "spaceform_float/errors.hpp"
#include "spaceform_float/spaceform.hpp"

namespace spaceform {

/// Unit directions with quadrature weights (dσ on S^{n-1}).
template <int Dim>
struct DirectionGrid {
  std::vector<Vec<Dim>> dirs;
  std::vector<double> weights;
  std::size_t size() const { return dirs.size(); }
};

/// N equally spaced angles θ_i = 2π(i + phase)/N.
inline DirectionGrid<2> circle_grid(int n, double phase = 0.0) {
  if (n < 3) throw PreconditionError("circle_grid: need at least 3 directions");
  DirectionGrid<2> g;
  g.dirs.reserve(n);
  const double h = 2.0 * std::numbers::pi / n;
  for (int i = 0; i < n; ++i) {
    const double th = h * (i + phase);
    g.dirs.emplace_back(std::cos(th), std::sin(th));
  }
  g.weights.assign(n, h);
  return g;
}

struct SphereMesh {
  std::vector<Vec<3>> vertices;
  std::vector<std::array<int, 3>> faces;
};

inline SphereMesh icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  SphereMesh m;
  const double raw[12][3] = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                             {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                             {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (const auto& p : raw) m.vertices.push_back(Vec<3>(p[0], p[1], p[2]).normalized());
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  return m;
}

inline SphereMesh subdivide(const SphereMesh& in) {
  SphereMesh out;
  out.vertices = in.vertices;
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    out.vertices.push_back((in.vertices[a] + in.vertices[b]).normalized());
    const int idx = static_cast<int>(out.vertices.size()) - 1;
    mid.emplace(key, idx);
    return idx;
  };
  for (const auto& f : in.faces) {
    const int a = midpoint(f[0], f[1]);
    const int b = midpoint(f[1], f[2]);
    const int c = midpoint(f[2], f[0]);
    out.faces.push_back({f[0], a, c});
    out.faces.push_back({f[1], b, a});
    out.faces.push_back({f[2], c, b});
    out.faces.push_back({a, b, c});
  }
  return out;
}

/// Area of the spherical triangle with unit vertices a, b, c.
inline double spherical_triangle_area(const Vec<3>& a, const Vec<3>& b, const Vec<3>& c) {
  const double num = std::abs(a.dot(b.cross(c)));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

/// Face-centre directions of the k-times subdivided icosahedron: 20·4^k
/// directions, weights are spherical triangle areas (summing to 4π).
inline DirectionGrid<3> icosphere_grid(int level) {
  if (level < 0 || level > 7) throw PreconditionError("icosphere_grid: level must be in [0, 7]");
  SphereMesh m = icosahedron();
  for (int i = 0; i < level; ++i) m = subdivide(m);
  DirectionGrid<3> g;
  g.dirs.reserve(m.faces.size());
  g.weights.reserve(m.faces.size());
  for (const auto& f : m.faces) {
    const Vec<3>& a = m.vertices[f[0]];
    const Vec<3>& b = m.vertices[f[1]];
    const Vec<3>& c = m.vertices[f[2]];
    g.dirs.push_back((a + b + c).normalized());
    g.weights.push_back(spherical_triangle_area(a, b, c));
  }
  return g;
}

/// Smallest icosphere level with at least `count` directions.
inline int icosphere_level_for(int count) {
  int level = 0;
  int n = 20;
  while (n < count && level < 7) {
    n *= 4;
    ++level;
  }
  return level;
}

/// Default grid for Wulff assembly: 2048 angles in the plane, 1280 in space.
template <int Dim>
DirectionGrid<Dim> default_direction_grid(int count = 0);

template <>
inline DirectionGrid<2> default_direction_grid<2>(int count) {
  return circle_grid(count > 0 ? count : 2048);
}

template <>
inline DirectionGrid<3> default_direction_grid<3>(int count) {
  return icosphere_grid(icosphere_level_for(count > 0 ? count : 1280));
}

/// Unit vector orthogonal to v in the plane, rotated +90°.
inline Vec<2> perp(const Vec<2>& v) { return Vec<2>(-v[1], v[0]); }

/// Orthonormal basis (w1, w2) of the plane orthogonal to the unit vector v.
inline std::pair<Vec<3>, Vec<3>> orthonormal_complement(const Vec<3>& v) {
  const Vec<3> helper = std::abs(v[0]) < 0.9 ? Vec<3>::UnitX() : Vec<3>::UnitY();
  const Vec<3> w1 = (helper - helper.dot(v) * v).normalized();
  const Vec<3> w2 = v.cross(w1);
  return {w1, w2};
}

}  // namespace spaceform
