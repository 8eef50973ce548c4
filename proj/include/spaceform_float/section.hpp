#pragma once

// λ-mass of hyperplane sections {x·v = t} ∩ K, with density
// (1 + λ‖x‖²)^{−(n+1)/2}. Sections are given in plane coordinates y, so that
// ‖x‖² = t² + ‖y‖².

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "spaceform_float/quadrature.hpp"
#include "spaceform_float/spaceform.hpp"

namespace spaceform {

/// Closed interval along a chord, s0 <= s1.
struct Chord {
  double s0 = 0.0;
  double s1 = 0.0;
  double length() const { return std::max(0.0, s1 - s0); }
};

/// ∫_{s0}^{s1} (a + λ s²)^{−3/2} ds with a = 1 + λt².
inline double chord_mass(double t, const Chord& c, double lambda) {
  if (!(c.s1 > c.s0)) return 0.0;
  const double a = 1.0 + lambda * t * t;
  auto prim = [&](double s) { return s / (a * std::sqrt(a + lambda * s * s)); };
  return prim(c.s1) - prim(c.s0);
}

/// Mass of the disk ‖y‖ ≤ r in the plane at height t (n = 3).
inline double centered_disk_mass(double t, double r, double lambda) {
  const double a = 1.0 + lambda * t * t;
  return std::numbers::pi * r * r / (a * (a + lambda * r * r));
}

/// Mass of {(y − y0)ᵀ A (y − y0) ≤ r2} at height t (n = 3), polar coordinates
/// about y0: periodic trapezoid in the angle, Gauss–Legendre in the radius.
inline double ellipse_section_mass(double t, const Vec<2>& y0, const Mat<2>& a2, double r2,
                                   double lambda) {
  if (!(r2 > 0.0)) return 0.0;
  const double a = 1.0 + lambda * t * t;
  const double iso = 0.5 * (a2(0, 0) + a2(1, 1));
  const bool isotropic = std::abs(a2(0, 0) - a2(1, 1)) <= 1e-14 * iso &&
                         std::abs(a2(0, 1)) <= 1e-14 * iso;
  const double r = std::sqrt(r2);
  if (isotropic && y0.norm() <= 1e-15 * (1.0 + r)) {
    return centered_disk_mass(t, r / std::sqrt(iso), lambda);
  }
  const GaussRule& g = gauss_legendre(16);
  auto ray = [&](double phi) {
    const Vec<2> e(std::cos(phi), std::sin(phi));
    const double rr = r / std::sqrt(e.dot(a2 * e));
    double s = 0.0;
    for (int i = 0; i < 16; ++i) {
      const double rho = 0.5 * rr * (g.nodes[i] + 1.0);
      const Vec<2> y = y0 + rho * e;
      const double q = a + lambda * y.squaredNorm();
      s += g.weights[i] * rho / (q * q);
    }
    return 0.5 * rr * s;
  };
  int n = 16;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += ray(2.0 * std::numbers::pi * i / n);
  double prev = sum * 2.0 * std::numbers::pi / n;
  while (n < 4096) {
    for (int i = 0; i < n; ++i) sum += ray(2.0 * std::numbers::pi * (i + 0.5) / n);
    n *= 2;
    const double cur = sum * 2.0 * std::numbers::pi / n;
    if (std::abs(cur - prev) <= 1e-14 * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

/// Mass of a convex polygon (vertices in order) at height t (n = 3).
inline double polygon_section_mass(double t, const std::vector<Vec<2>>& poly, double lambda) {
  if (poly.size() < 3) return 0.0;
  const double a = 1.0 + lambda * t * t;
  Vec<2> c = Vec<2>::Zero();
  for (const auto& p : poly) c += p;
  c /= static_cast<double>(poly.size());
  auto dens = [&](const Vec<2>& y) {
    const double q = a + lambda * y.squaredNorm();
    return 1.0 / (q * q);
  };
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    s += triangle_integrate(c, poly[i], poly[(i + 1) % poly.size()], dens, 8);
  }
  return s;
}

/// Sutherland–Hodgman clip of a convex polygon by {y : n·y <= b}.
inline std::vector<Vec<2>> clip_polygon(const std::vector<Vec<2>>& poly, const Vec<2>& n, double b) {
  std::vector<Vec<2>> out;
  const std::size_t m = poly.size();
  out.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec<2>& p = poly[i];
    const Vec<2>& q = poly[(i + 1) % m];
    const double dp = n.dot(p) - b;
    const double dq = n.dot(q) - b;
    if (dp <= 0.0) out.push_back(p);
    if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
      out.push_back(p + (dp / (dp - dq)) * (q - p));
    }
  }
  return out;
}

}  // namespace spaceform
