#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "spaceform_float/errors.hpp"

namespace spaceform {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

namespace detail {

inline GaussRule build_gauss_legendre(int m) {
  GaussRule r;
  r.nodes.assign(m, 0.0);
  r.weights.assign(m, 0.0);
  if (m == 1) {
    r.weights[0] = 2.0;
    return r;
  }
  auto legendre = [m](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= m; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = m * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[m - 1 - i] = x;
    r.weights[i] = w;
    r.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) r.nodes[m / 2] = 0.0;
  return r;
}

}  // namespace detail

inline constexpr int kMaxGaussOrder = 64;

/// Gauss–Legendre rule with m points on [-1, 1], 1 <= m <= 64.
inline const GaussRule& gauss_legendre(int m) {
  static const std::vector<GaussRule> table = [] {
    std::vector<GaussRule> t(kMaxGaussOrder + 1);
    for (int k = 1; k <= kMaxGaussOrder; ++k) t[k] = detail::build_gauss_legendre(k);
    return t;
  }();
  if (m < 1 || m > kMaxGaussOrder) throw PreconditionError("gauss_legendre: order out of range");
  return table[m];
}

template <class F>
double gauss_legendre_integrate(F&& f, double a, double b, int m) {
  const GaussRule& g = gauss_legendre(m);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += g.weights[i] * f(mid + half * g.nodes[i]);
  return s * half;
}

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

// Gauss–Kronrod 7/15 nodes and weights on [0, 1], symmetric part.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkPanel {
  double a, b, value, error, l1;
  bool operator<(const GkPanel& o) const { return error < o.error; }
};

template <class F>
GkPanel gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kKronrodWeights[7];
  double g = fc * kGaussWeights[3];
  double l1 = std::abs(fc) * kKronrodWeights[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kKronrodNodes[j];
    const double f1 = f(c - x), f2 = f(c + x);
    k += kKronrodWeights[j] * (f1 + f2);
    l1 += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) g += kGaussWeights[j / 2] * (f1 + f2);
  }
  const double value = k * h;
  const double err = std::max(std::abs((k - g) * h), 50.0 * std::numeric_limits<double>::epsilon() * std::abs(l1 * h));
  return {a, b, value, err, std::abs(l1 * h)};
}

}  // namespace detail

/// Globally adaptive Gauss–Kronrod (7/15) on [a, b]: the panel with the
/// largest error is bisected until the total error is below tol·L1. Throws
/// QuadratureFailure when that does not happen within the panel budget.
template <class F>
QuadResult adaptive_integrate(F&& f, double a, double b, double tol = 1e-12, std::size_t max_panels = 4096) {
  if (a == b) return {};
  std::priority_queue<detail::GkPanel> heap;
  heap.push(detail::gk15(f, a, b));
  double value = heap.top().value, error = heap.top().error, l1 = heap.top().l1;
  while (error > tol * l1 && heap.size() < max_panels) {
    const detail::GkPanel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > std::min(p.a, p.b) && m < std::max(p.a, p.b))) {
      heap.push(p);
      break;
    }
    const detail::GkPanel left = detail::gk15(f, p.a, m), right = detail::gk15(f, m, p.b);
    value += left.value + right.value - p.value;
    error += left.error + right.error - p.error;
    l1 += left.l1 + right.l1 - p.l1;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed drift from the running updates.
  value = error = l1 = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    l1 += heap.top().l1;
    heap.pop();
  }
  if (!std::isfinite(value)) throw QuadratureFailure("adaptive_integrate: non-finite integral");
  if (error > 100.0 * tol * l1 && error > 1e-300) {
    throw QuadratureFailure("adaptive_integrate: tolerance not reached at max subdivision");
  }
  return {value, error};
}

namespace detail {

template <class F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth, double& err) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, err) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, err);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction; tol is relative to the
/// magnitude of the first coarse estimate.
template <class F>
QuadResult adaptive_simpson(F f, double a, double b, double tol = 1e-10, int max_depth = 40) {
  if (a == b) return {};
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double abs_tol = tol * std::max(std::abs(whole), 1e-300);
  double err = 0.0;
  const double v = detail::simpson_step(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth, err);
  return {v, err};
}

/// Integrates f over the triangle (p0, p1, p2) with the collapsed (Duffy)
/// Gauss product rule of order m. f takes a 2-vector.
template <class V, class F>
double triangle_integrate(const V& p0, const V& p1, const V& p2, F&& f, int m = 8) {
  const GaussRule& g = gauss_legendre(m);
  const V e1 = p1 - p0;
  const V e2 = p2 - p0;
  const double jac = std::abs(e1[0] * e2[1] - e1[1] * e2[0]);
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    const double u = 0.5 * (g.nodes[i] + 1.0);
    for (int j = 0; j < m; ++j) {
      const double w = 0.5 * (g.nodes[j] + 1.0);
      const V p = p0 + u * (e1 + w * (e2 - e1));
      s += g.weights[i] * g.weights[j] * u * f(p);
    }
  }
  return 0.25 * s * jac;
}

}  // namespace spaceform
