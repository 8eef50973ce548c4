#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "spaceform_float/body.hpp"
#include "spaceform_float/capvolume.hpp"
#include "spaceform_float/direction_grid.hpp"
#include "spaceform_float/errors.hpp"
#include "spaceform_float/quadrature.hpp"
#include "spaceform_float/spaceform.hpp"

namespace spaceform {

/// κ_m, the volume of the Euclidean unit ball in R^m.
inline double unit_ball_volume(int m) {
  return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

/// c_n = ½((n+1)/κ_{n−1})^{2/(n+1)}.
inline double constant_c_n(int n) {
  if (n < 2) throw PreconditionError("constant_c_n: n must be at least 2");
  return 0.5 * std::pow((n + 1.0) / unit_ball_volume(n - 1), 2.0 / (n + 1.0));
}

template <int Dim>
constexpr int default_boundary_resolution() {
  return Dim == 2 ? 4096 : 20480;
}

template <int Dim>
using RegionPredicate = std::function<bool(const Vec<Dim>&)>;

struct FloatingAreaResult {
  double value = 0.0;
  double quadrature_error = 0.0;
  int resolution = 0;
};

namespace detail {

template <int Dim>
double floating_sum(const BoundaryQuadrature<Dim>& q, double lambda, const RegionPredicate<Dim>* omega) {
  double s = 0.0;
  for (const auto& b : q) {
    if (b.curvature <= 0.0) continue;
    if (omega && !(*omega)(b.x)) continue;
    const double conf = 1.0 + lambda * b.x.squaredNorm();
    if (!(conf > 0.0)) throw DomainError("floating_area: boundary sample outside the model");
    s += b.weight * std::pow(b.curvature, 1.0 / (Dim + 1)) * std::pow(conf, -0.5 * (Dim - 1));
  }
  return s;
}

}  // namespace detail

/// Ω^λ(K, ω) = ∫_{bd K ∩ ω} H^e^{1/(n+1)} (1 + λ‖x‖²)^{−(n−1)/2} dvol^e.
/// The error estimate compares against half the resolution.
template <int Dim>
FloatingAreaResult floating_measure(const ConvexBody<Dim>& k, double lambda, const RegionPredicate<Dim>& omega,
                                    int resolution = default_boundary_resolution<Dim>()) {
  const RegionPredicate<Dim>* om = omega ? &omega : nullptr;
  FloatingAreaResult r;
  r.resolution = resolution;
  if (is_polytope<Dim>(k)) return r;
  r.value = detail::floating_sum<Dim>(boundary_quadrature<Dim>(k, resolution, 0.5), lambda, om);
  const int coarse = Dim == 2 ? resolution / 2 : resolution / 4;
  if (coarse >= 8) {
    const double c = detail::floating_sum<Dim>(boundary_quadrature<Dim>(k, coarse, 0.5), lambda, om);
    r.quadrature_error = std::abs(r.value - c);
  }
  return r;
}

template <int Dim>
FloatingAreaResult floating_area(const ConvexBody<Dim>& k, double lambda,
                                 int resolution = default_boundary_resolution<Dim>()) {
  return floating_measure<Dim>(k, lambda, RegionPredicate<Dim>{}, resolution);
}

/// n κ_n ρ^{(n−1)n/(n+1)} (1 + λρ²)^{−(n−1)/2}, ρ = tan^λ α.
inline double ball_floating_area_closed(double alpha, double lambda, int n) {
  if (!(alpha > 0.0)) throw DomainError("ball_floating_area_closed: alpha must be positive");
  const double rho = tan_lambda(alpha, lambda);
  const double conf = 1.0 + lambda * rho * rho;
  if (!(conf > 0.0)) throw DomainError("ball_floating_area_closed: ball leaves the model");
  return n * unit_ball_volume(n) * std::pow(rho, (n - 1.0) * n / (n + 1.0)) * std::pow(conf, -0.5 * (n - 1));
}

namespace detail {

/// ∫_{r1}^{r2} t^{n−1} (1 + λt²)^{−(n+1)/2} dt.
template <int Dim>
double radial_mass(double r1, double r2, double lambda) {
  if (r1 == r2) return 0.0;
  if constexpr (Dim == 2) {
    const double a1 = 1.0 + lambda * r1 * r1;
    const double a2 = 1.0 + lambda * r2 * r2;
    const double s1 = std::sqrt(a1), s2 = std::sqrt(a2);
    return (r2 - r1) * (r2 + r1) / (s1 * s2 * (s1 + s2));
  } else {
    auto f = [lambda](double t) {
      const double a = 1.0 + lambda * t * t;
      return std::pow(t, Dim - 1) * std::pow(a, -0.5 * (Dim + 1));
    };
    return adaptive_simpson(f, r1, r2, 1e-10).value;
  }
}

}  // namespace detail

/// vol^λ(K \ L) = ∫_{bd K} (x·N/‖x‖^n) ∫_{‖x_L‖}^{‖x‖} t^{n−1}(1+λt²)^{−(n+1)/2} dt dvol^e(x),
/// where x_L is the point of bd L on the ray through x. Needs L ⊆ K and the
/// origin interior to L.
template <int Dim>
double cone_volume_difference(const ConvexBody<Dim>& k, const ConvexBody<Dim>& l, double lambda,
                              int resolution = default_boundary_resolution<Dim>(), double phase = 0.0) {
  const DirectionGrid<Dim> check = Dim == 2 ? DirectionGrid<Dim>(default_direction_grid<Dim>(512))
                                            : DirectionGrid<Dim>(default_direction_grid<Dim>(320));
  for (const auto& v : check.dirs) {
    const double hl = support<Dim>(l, v);
    const double hk = support<Dim>(k, v);
    if (!(hl > 0.0)) throw PreconditionError("cone_volume_difference: origin is not interior to L");
    if (hl > hk + 1e-10 * std::max(1.0, std::abs(hk))) {
      throw PreconditionError("cone_volume_difference: L is not contained in K");
    }
  }
  const BoundaryQuadrature<Dim> q = boundary_quadrature<Dim>(k, resolution, phase);
  std::vector<double> part(q.size());
  parallel_for(q.size(), [&](std::size_t i) {
    const auto& b = q[i];
    const double r2 = b.x.norm();
    const Vec<Dim> u = b.x / r2;
    const double r1 = std::min(radial<Dim>(l, u), r2);
    part[i] = b.weight * b.x.dot(b.normal) / std::pow(r2, Dim) * detail::radial_mass<Dim>(r1, r2, lambda);
  });
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

/// Monte-Carlo estimate of vol^λ(K \ L) + vol^λ(L \ K).
template <int Dim>
MonteCarloEstimate symmetric_difference_volume(const ConvexBody<Dim>& k, const ConvexBody<Dim>& l, double lambda,
                                               std::size_t samples, std::uint64_t seed) {
  Vec<Dim> lo, hi;
  for (int i = 0; i < Dim; ++i) {
    const Vec<Dim> e = Vec<Dim>::Unit(i);
    hi[i] = std::max(support<Dim>(k, e), support<Dim>(l, e));
    lo[i] = -std::max(support<Dim>(k, Vec<Dim>(-e)), support<Dim>(l, Vec<Dim>(-e)));
  }
  double box = 1.0;
  for (int i = 0; i < Dim; ++i) box *= hi[i] - lo[i];
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vec<Dim> x;
    for (int i = 0; i < Dim; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    double f = 0.0;
    if (contains<Dim>(k, x) != contains<Dim>(l, x)) f = std::pow(1.0 + lambda * x.squaredNorm(), -0.5 * (Dim + 1));
    sum += f;
    sum2 += f * f;
  }
  const double n = static_cast<double>(std::max<std::size_t>(samples, 2));
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean);
  return {box * mean, box * std::sqrt(var / (n - 1.0))};
}

struct PowerFit {
  double q0 = 0.0;
  double q1 = 0.0;
  double exponent = 0.0;
  double rms = 0.0;
};

/// Least-squares fit q ≈ q0 + q1 δ^p with p scanned over [p_min, p_max].
inline PowerFit fit_power_law(const std::vector<double>& delta, const std::vector<double>& q, double p_min = 0.4,
                              double p_max = 1.2) {
  if (delta.size() != q.size() || delta.empty()) throw PreconditionError("fit_power_law: bad input");
  PowerFit best;
  best.rms = std::numeric_limits<double>::infinity();
  if (delta.size() < 3) {
    best.q0 = q.back();
    best.exponent = std::numeric_limits<double>::quiet_NaN();
    best.rms = 0.0;
    return best;
  }
  const int steps = 800;
  for (int s = 0; s <= steps; ++s) {
    const double p = p_min + (p_max - p_min) * s / steps;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(delta.size());
    for (std::size_t i = 0; i < delta.size(); ++i) {
      const double x = std::pow(delta[i], p);
      sx += x;
      sy += q[i];
      sxx += x * x;
      sxy += x * q[i];
    }
    const double den = n * sxx - sx * sx;
    if (!(std::abs(den) > 0.0)) continue;
    const double q1 = (n * sxy - sx * sy) / den;
    const double q0 = (sy - q1 * sx) / n;
    double r2 = 0.0;
    for (std::size_t i = 0; i < delta.size(); ++i) {
      const double e = q0 + q1 * std::pow(delta[i], p) - q[i];
      r2 += e * e;
    }
    const double rms = std::sqrt(r2 / n);
    if (rms < best.rms) best = {q0, q1, p, rms};
  }
  return best;
}

struct ConvergenceOptions {
  int directions = 0;        // 0: dimension default
  int max_directions = 0;    // 0: 65536 in the plane, 20480 in space
  double tol = 1e-2;         // acceptance tolerance; refinement stops at 0.1·tol
  int area_resolution = 0;   // 0: dimension default
  CapOptions cap;
};

struct ConvergenceReport {
  std::vector<double> delta_grid;
  std::vector<double> quotients;
  std::vector<int> directions_used;
  std::vector<double> volume_differences;
  double extrapolated_limit = 0.0;
  double fitted_exponent = 0.0;
  double fit_rms = 0.0;
  double floating_area = 0.0;
  double c_n = 0.0;
  double target = 0.0;
  double relative_error = 0.0;
  double lambda_volume = 0.0;
};

/// Geometric δ-grid from hi down to lo with count points.
inline std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw PreconditionError("geometric_grid: need 0 < lo < hi, count >= 2");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = hi * std::pow(lo / hi, static_cast<double>(i) / (count - 1));
  return g;
}

namespace detail {

template <int Dim>
DirectionGrid<Dim> grid_with(int count) {
  if constexpr (Dim == 2) return circle_grid(count, 0.0);
  else return icosphere_grid(icosphere_level_for(count));
}

/// Quotient vol^λ(K \ F_δ)/δ on a given grid, with boundary nodes of K
/// aligned with the grid directions.
template <int Dim>
double quotient_on_grid(const ConvexBody<Dim>& k, const CapDepthProfile<Dim>& prof, double mu, double lambda,
                        double& vol_diff) {
  auto fb = floating_body_from_profile<Dim>(prof, mu);
  if (fb.empty) throw EmptyWulff("derivative_estimate: floating body is empty");
  const ConvexBody<Dim> l = fb.polytope();
  vol_diff = cone_volume_difference<Dim>(k, l, lambda, static_cast<int>(prof.grid.size()), 0.0);
  return vol_diff / prof.delta;
}

}  // namespace detail

/// Right derivative of δ ↦ vol^λ(F^λ_δ K) at 0 against c_n Ω^λ(K). Each δ
/// refines the direction grid by doubling until the quotient moves by less
/// than 0.1·tol.
template <int Dim>
ConvergenceReport derivative_estimate(const ConvexBody<Dim>& k, double lambda, std::vector<double> deltas,
                                      const ConvergenceOptions& opt = {}) {
  if (deltas.empty()) throw PreconditionError("derivative_estimate: empty delta grid");
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] < deltas[i - 1])) throw PreconditionError("derivative_estimate: delta grid must be strictly decreasing");
  }
  ConvergenceReport rep;
  rep.delta_grid = deltas;
  const double mu = lambda_volume<Dim>(k, lambda, opt.cap);
  rep.lambda_volume = mu;
  const int n0 = opt.directions > 0 ? opt.directions : (Dim == 2 ? 2048 : 1280);
  const int nmax = opt.max_directions > 0 ? opt.max_directions : (Dim == 2 ? 65536 : 20480);
  for (double delta : deltas) {
    if (!(std::pow(delta, 0.5 * (Dim + 1)) < mu)) throw OutOfRange("derivative_estimate: delta not admissible");
    int n = n0;
    DirectionGrid<Dim> grid = detail::grid_with<Dim>(n);
    CapDepthProfile<Dim> prof = cap_depth_profile<Dim>(k, grid, delta, lambda, mu, opt.cap);
    double vd = 0.0;
    double q = detail::quotient_on_grid<Dim>(k, prof, mu, lambda, vd);
    while (true) {
      const int n2 = Dim == 2 ? 2 * static_cast<int>(grid.size()) : 4 * static_cast<int>(grid.size());
      if (n2 > nmax) break;
      DirectionGrid<Dim> g2 = detail::grid_with<Dim>(n2);
      std::vector<std::optional<CapDepth>> known;
      if constexpr (Dim == 2) {
        known.resize(g2.size());
        for (std::size_t i = 0; i < prof.depths.size(); ++i) {
          known[2 * i] = CapDepth{prof.depths[i], prof.residuals[i], 0};
        }
      }
      CapDepthProfile<Dim> p2 = cap_depth_profile<Dim>(k, g2, delta, lambda, mu, opt.cap, &known);
      double vd2 = 0.0;
      const double q2 = detail::quotient_on_grid<Dim>(k, p2, mu, lambda, vd2);
      const bool settled = std::abs(q2 - q) <= 0.1 * opt.tol * std::max(std::abs(q2), 1e-300);
      grid = std::move(g2);
      prof = std::move(p2);
      q = q2;
      vd = vd2;
      if (settled) break;
    }
    rep.quotients.push_back(q);
    rep.volume_differences.push_back(vd);
    rep.directions_used.push_back(static_cast<int>(grid.size()));
  }
  const PowerFit fit = fit_power_law(rep.delta_grid, rep.quotients);
  rep.extrapolated_limit = fit.q0;
  rep.fitted_exponent = fit.exponent;
  rep.fit_rms = fit.rms;
  const int res = opt.area_resolution > 0 ? opt.area_resolution : default_boundary_resolution<Dim>();
  rep.floating_area = floating_area<Dim>(k, lambda, res).value;
  rep.c_n = constant_c_n(Dim);
  rep.target = rep.c_n * rep.floating_area;
  rep.relative_error = rep.target != 0.0 ? std::abs(rep.extrapolated_limit - rep.target) / std::abs(rep.target)
                                         : std::abs(rep.extrapolated_limit);
  return rep;
}

}  // namespace spaceform
