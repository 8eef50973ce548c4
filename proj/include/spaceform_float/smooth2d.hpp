#pragma once

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "spaceform_float/boundary.hpp"
#include "spaceform_float/direction_grid.hpp"
#include "spaceform_float/errors.hpp"
#include "spaceform_float/section.hpp"
#include "spaceform_float/spaceform.hpp"

namespace spaceform {

struct FourierTerm {
  int k = 2;
  double a = 0.0;  // cos kθ
  double b = 0.0;  // sin kθ
};

/// Planar body given by its support function
/// h(θ) = a0 + Σ_{k>=2} (a_k cos kθ + b_k sin kθ). The boundary point with
/// normal u(θ) is h u + h' u⊥ and the radius of curvature is h + h''.
class Smooth2D {
 public:
  using Point = Vec<2>;

  Smooth2D(double a0, std::vector<FourierTerm> terms) : a0_(a0), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      if (t.k < 2) throw PreconditionError("Smooth2D: harmonics must have k >= 2");
    }
    int kmax = 2;
    for (const auto& t : terms_) kmax = std::max(kmax, t.k);
    const int n = 4096 + 8 * kmax;
    min_rho_ = std::numeric_limits<double>::infinity();
    min_h_ = std::numeric_limits<double>::infinity();
    max_r_ = 0.0;
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * std::numbers::pi * i / n;
      min_rho_ = std::min(min_rho_, rho(th));
      min_h_ = std::min(min_h_, h(th));
      max_r_ = std::max(max_r_, point(th).norm());
    }
    if (!(min_rho_ > 0.0)) throw PreconditionError("Smooth2D: h + h'' must be positive (strict convexity)");
    if (!(min_h_ > 0.0)) throw PreconditionError("Smooth2D: h must be positive (origin interior)");
  }

  double a0() const { return a0_; }
  const std::vector<FourierTerm>& terms() const { return terms_; }

  double h(double th) const {
    double s = a0_;
    for (const auto& t : terms_) s += t.a * std::cos(t.k * th) + t.b * std::sin(t.k * th);
    return s;
  }
  double dh(double th) const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.k * (-t.a * std::sin(t.k * th) + t.b * std::cos(t.k * th));
    return s;
  }
  double d2h(double th) const {
    double s = 0.0;
    for (const auto& t : terms_) s -= t.k * t.k * (t.a * std::cos(t.k * th) + t.b * std::sin(t.k * th));
    return s;
  }
  double rho(double th) const { return h(th) + d2h(th); }

  Point point(double th) const {
    const double c = std::cos(th), s = std::sin(th);
    const double hv = h(th), dv = dh(th);
    return {hv * c - dv * s, hv * s + dv * c};
  }

  double support(const Point& v) const { return h(std::atan2(v[1], v[0])); }
  double curvature(double th) const { return 1.0 / rho(th); }
  double bounding_radius() const { return max_r_ * (1.0 + 1e-9); }

  /// Normal angle θ of the boundary point on the ray of angle psi.
  double theta_of_ray(double psi) const {
    const Point u(std::cos(psi), std::sin(psi));
    auto f = [&](double th) { return detail_cross(u, point(th)); };
    return solve(f, psi - 0.5 * std::numbers::pi, psi + 0.5 * std::numbers::pi);
  }

  double radial(const Point& u) const {
    const double psi = std::atan2(u[1], u[0]);
    return point(theta_of_ray(psi)).norm();
  }

  bool contains(const Point& x, double tol = 0.0) const {
    const double r = x.norm();
    if (r == 0.0) return true;
    return r <= radial(x / r) + tol;
  }

  std::vector<double> breakpoints(const Point&) const { return {}; }

  /// Chord {x·v = t} ∩ K along perp(v); the endpoints have normal angles in
  /// (φ, φ+π) and (φ−π, φ), on which x(θ)·v is monotone.
  Chord chord(const Point& v, double /*t*/, double d_top, double d_bot) const {
    if (!(d_top > 0.0) || !(d_bot > 0.0)) return {0.0, 0.0};
    const double phi = std::atan2(v[1], v[0]);
    const Point w = perp(v);
    const bool near_top = d_top <= d_bot;
    const double h_top = h(phi);
    const double h_bot = h(phi + std::numbers::pi);
    auto g = [&](double th) {
      const double xv = point(th).dot(v);
      return near_top ? (xv - h_top) + d_top : (xv + h_bot) - d_bot;
    };
    const double th1 = solve(g, phi, phi + std::numbers::pi);
    const double th0 = solve(g, phi - std::numbers::pi, phi);
    double s0 = point(th0).dot(w);
    double s1 = point(th1).dot(w);
    if (s0 > s1) std::swap(s0, s1);
    return {s0, s1};
  }

  double section_mass(const Point& v, double t, double d_top, double d_bot, double lambda) const {
    return chord_mass(t, chord(v, t, d_top, d_bot), lambda);
  }

  /// Trapezoid nodes in the normal angle: weight ds = ρ dθ, H^e = 1/ρ.
  BoundaryQuadrature<2> boundary_quadrature(int resolution, double phase = 0.0) const {
    if (resolution < 3) throw PreconditionError("boundary_quadrature: resolution too small");
    BoundaryQuadrature<2> q;
    q.reserve(resolution);
    const double dt = 2.0 * std::numbers::pi / resolution;
    for (int i = 0; i < resolution; ++i) {
      const double th = dt * (i + phase);
      const double r = rho(th);
      q.push_back({point(th), Point(std::cos(th), std::sin(th)), 1.0 / r, r * dt});
    }
    return q;
  }

 private:
  static double detail_cross(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

  template <class F>
  static double solve(F&& f, double lo, double hi) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
      // Only reachable through rounding at a tangency; pick the nearer end.
      return std::abs(flo) < std::abs(fhi) ? lo : hi;
    }
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                     boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
  }

  double a0_;
  std::vector<FourierTerm> terms_;
  double min_rho_ = 0.0;
  double min_h_ = 0.0;
  double max_r_ = 0.0;
};

}  // namespace spaceform
