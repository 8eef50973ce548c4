#pragma once

// Weighted cap measures G(v, Δ) = μ(K ∩ {x·v >= h_K(v) − Δ}), the cap-depth
// equation G(v, s_δ(v)) = δ^{(n+1)/2}, and the λ-floating body as the Wulff
// shape [h_K − s_δ].

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "spaceform_float/body.hpp"
#include "spaceform_float/direction_grid.hpp"
#include "spaceform_float/errors.hpp"
#include "spaceform_float/parallel.hpp"
#include "spaceform_float/quadrature.hpp"
#include "spaceform_float/spaceform.hpp"
#include "spaceform_float/wulff.hpp"

namespace spaceform {

struct CapOptions {
  double quad_tol = 1e-12;        // relative, per integration piece
  double depth_abs_tol = 1e-12;   // final bracket width, absolute
  double depth_rel_tol = 1e-9;    // final bracket width, relative to the depth
  int max_iterations = 200;
};

/// G(v, Δ) with its quadrature error estimate.
template <int Dim>
QuadResult cap_measure_with_error(const ConvexBody<Dim>& k, const Vec<Dim>& v, double depth, double lambda,
                                  const CapOptions& opt = {}) {
  const double h = support<Dim>(k, v);
  const double hb = support<Dim>(k, Vec<Dim>(-v));
  const double w = h + hb;
  if (!(depth >= 0.0) || depth > w * (1.0 + 1e-12) + 1e-300) {
    throw PreconditionError("cap_measure: depth must lie in [0, width]");
  }
  depth = std::min(depth, w);
  if (depth == 0.0) return {};

  // Split points in the depth coordinate d = h − t.
  std::vector<double> cuts = {0.0, depth};
  if (0.5 * w < depth) cuts.push_back(0.5 * w);
  for (double t : breakpoints<Dim>(k, v)) {
    const double d = h - t;
    if (d > 1e-14 * w && d < depth - 1e-14 * w) cuts.push_back(d);
  }
  std::sort(cuts.begin(), cuts.end());
  // Near-coincident vertex heights would leave slivers whose integrand is pure
  // rounding noise; merge them.
  const double merge = 1e-11 * w;
  std::vector<double> kept = {0.0};
  for (double c : cuts) {
    if (c - kept.back() > merge && depth - c > merge) kept.push_back(c);
  }
  kept.push_back(depth);
  cuts = std::move(kept);

  QuadResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double da = cuts[i], db = cuts[i + 1];
    if (!(db > da)) continue;
    QuadResult r;
    if (db <= 0.5 * w) {
      // d = u², so square-root edges at the top become smooth.
      auto f = [&](double u) {
        const double d = u * u;
        return 2.0 * u * section_mass<Dim>(k, v, h - d, d, w - d, lambda);
      };
      r = adaptive_integrate(f, std::sqrt(da), std::sqrt(db), opt.quad_tol);
    } else {
      // Measured from the bottom: d_bot = u².
      auto f = [&](double u) {
        const double e = u * u;
        return 2.0 * u * section_mass<Dim>(k, v, -hb + e, w - e, e, lambda);
      };
      r = adaptive_integrate(f, std::sqrt(std::max(0.0, w - db)), std::sqrt(w - da), opt.quad_tol);
    }
    total.value += r.value;
    total.error += r.error;
  }
  return total;
}

template <int Dim>
double cap_measure(const ConvexBody<Dim>& k, const Vec<Dim>& v, double depth, double lambda,
                   const CapOptions& opt = {}) {
  return cap_measure_with_error<Dim>(k, v, depth, lambda, opt).value;
}

namespace detail {

/// 2π ρ² / (√a (1 + √a)), a = 1 + λρ²: the λ-area of the centred disk.
inline double centered_disk_area(double rho, double lambda) {
  const double a = 1.0 + lambda * rho * rho;
  const double s = std::sqrt(a);
  return 2.0 * std::numbers::pi * rho * rho / (s * (1.0 + s));
}

/// λ-volume of the centred ball of Euclidean radius rho in R³.
inline double centered_ball_volume3(double rho, double lambda) {
  if (lambda == 0.0) return 4.0 / 3.0 * std::numbers::pi * rho * rho * rho;
  const double k = std::sqrt(std::abs(lambda));
  const double x = k * rho;
  if (x < 1e-3) {
    // Series of ∫_0^ρ 4πr²(1+λr²)^{-2} dr.
    const double l = lambda * rho * rho;
    return 4.0 * std::numbers::pi * rho * rho * rho * (1.0 / 3.0 - 2.0 * l / 5.0 + 3.0 * l * l / 7.0);
  }
  if (lambda > 0.0) return 2.0 * std::numbers::pi / (k * k * k) * (std::atan(x) - x / (1.0 + x * x));
  return 2.0 * std::numbers::pi / (k * k * k) * (x / (1.0 - x * x) - std::atanh(x));
}

template <int Dim>
std::optional<double> centered_ball_radius(const ConvexBody<Dim>& k) {
  const auto* e = std::get_if<Ellipsoid<Dim>>(&k);
  if (!e || e->center().norm() > 0.0) return std::nullopt;
  const Mat<Dim>& m = e->shape();
  const double d = m(0, 0);
  if (!((m - d * Mat<Dim>::Identity()).norm() <= 1e-15 * d)) return std::nullopt;
  return 1.0 / std::sqrt(d);
}

}  // namespace detail

/// μ(K) = vol^λ(K): closed form for centred balls, else the full-width cap.
template <int Dim>
double lambda_volume(const ConvexBody<Dim>& k, double lambda, const CapOptions& opt = {}) {
  if (const auto r = detail::centered_ball_radius<Dim>(k)) {
    if constexpr (Dim == 2) return detail::centered_disk_area(*r, lambda);
    else return detail::centered_ball_volume3(*r, lambda);
  }
  const Vec<Dim> e = Vec<Dim>::UnitX();
  return cap_measure<Dim>(k, e, width<Dim>(k, e), lambda, opt);
}

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Uniform sampling in a bounding box of the cap, weighted by the λ-density.
template <int Dim>
MonteCarloEstimate cap_measure_mc(const ConvexBody<Dim>& k, const Vec<Dim>& v, double depth, double lambda,
                                  std::size_t samples, std::uint64_t seed) {
  if (depth <= 0.0 || samples == 0) return {};
  const double h = support<Dim>(k, v);
  Mat<Dim> frame;
  frame.col(0) = v;
  if constexpr (Dim == 2) {
    frame.col(1) = perp(v);
  } else {
    const auto [w1, w2] = orthonormal_complement(v);
    frame.col(1) = w1;
    frame.col(2) = w2;
  }
  Vec<Dim> lo, hi;
  lo[0] = h - depth;
  hi[0] = h;
  for (int i = 1; i < Dim; ++i) {
    const Vec<Dim> w = frame.col(i);
    hi[i] = support<Dim>(k, w);
    lo[i] = -support<Dim>(k, Vec<Dim>(-w));
  }
  double box = 1.0;
  for (int i = 0; i < Dim; ++i) box *= hi[i] - lo[i];
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vec<Dim> c;
    for (int i = 0; i < Dim; ++i) c[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    const Vec<Dim> x = frame * c;
    double f = 0.0;
    if (contains<Dim>(k, x)) f = std::pow(1.0 + lambda * x.squaredNorm(), -0.5 * (Dim + 1));
    sum += f;
    sum2 += f * f;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean);
  return {box * mean, box * std::sqrt(var / (n - 1.0))};
}

struct CapDepth {
  double depth = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Solves G(v, s) = δ^{(n+1)/2} on (0, width). mu is μ(K) if already known.
template <int Dim>
CapDepth cap_depth_solve(const ConvexBody<Dim>& k, const Vec<Dim>& v, double delta, double lambda,
                         std::optional<double> mu = std::nullopt, const CapOptions& opt = {}) {
  const double p = 2.0 / (Dim + 1);
  const double total = mu ? *mu : lambda_volume<Dim>(k, lambda, opt);
  if (!(delta > 0.0)) throw OutOfRange("cap_depth_solve: delta must be positive");
  const double tau = std::pow(delta, 0.5 * (Dim + 1));
  if (!(tau < total)) throw OutOfRange("cap_depth_solve: delta^((n+1)/2) must be below mu(K)");
  const double w = width<Dim>(k, v);
  const double target = std::pow(tau, p);
  auto f = [&](double d) { return std::pow(cap_measure<Dim>(k, v, d, lambda, opt), p) - target; };
  auto done = [&](double a, double b) {
    const double gap = b - a;
    return gap <= opt.depth_abs_tol && gap <= opt.depth_rel_tol * std::max(std::abs(a), std::abs(b));
  };
  std::uintmax_t iters = static_cast<std::uintmax_t>(opt.max_iterations);
  const auto r = boost::math::tools::toms748_solve(f, 0.0, w, -target, std::pow(total, p) - target, done, iters);
  CapDepth out;
  out.depth = 0.5 * (r.first + r.second);
  out.residual = std::abs(cap_measure<Dim>(k, v, out.depth, lambda, opt) - tau);
  out.iterations = static_cast<int>(iters);
  return out;
}

/// Per-direction depths s_δ(v) over a direction grid.
template <int Dim>
struct CapDepthProfile {
  double delta = 0.0;
  DirectionGrid<Dim> grid;
  std::vector<double> support;   // h_K(v_i)
  std::vector<double> depths;    // s_δ(v_i)
  std::vector<double> residuals;

  std::vector<double> wulff_profile() const {
    std::vector<double> f(depths.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = support[i] - depths[i];
    return f;
  }
};

/// Solves the cap-depth equation on every grid direction. Entries of `known`
/// that hold a value are reused (nested grids).
template <int Dim>
CapDepthProfile<Dim> cap_depth_profile(const ConvexBody<Dim>& k, const DirectionGrid<Dim>& grid, double delta,
                                       double lambda, double mu, const CapOptions& opt = {},
                                       const std::vector<std::optional<CapDepth>>* known = nullptr) {
  CapDepthProfile<Dim> prof;
  prof.delta = delta;
  prof.grid = grid;
  const std::size_t n = grid.size();
  prof.support.resize(n);
  prof.depths.resize(n);
  prof.residuals.resize(n);
  parallel_for(n, [&](std::size_t i) {
    const Vec<Dim>& v = grid.dirs[i];
    prof.support[i] = support<Dim>(k, v);
    CapDepth d;
    if (known && i < known->size() && (*known)[i]) {
      d = *(*known)[i];
    } else {
      d = cap_depth_solve<Dim>(k, v, delta, lambda, mu, opt);
    }
    prof.depths[i] = d.depth;
    prof.residuals[i] = d.residual;
  });
  return prof;
}

template <int Dim>
class FloatingBodyResult {
 public:
  CapDepthProfile<Dim> profile;
  double mu = 0.0;
  bool empty = false;
  double gap_estimate = 0.0;
  std::optional<Polytope<Dim>> body;

  const Polytope<Dim>& polytope() const {
    if (!body) throw EmptyWulff("floating body is empty");
    return *body;
  }
};

/// F^λ_δ K = [h_K − s_δ] on the grid.
template <int Dim>
FloatingBodyResult<Dim> floating_body_from_profile(CapDepthProfile<Dim> prof, double mu) {
  FloatingBodyResult<Dim> r;
  r.mu = mu;
  try {
    r.body = wulff_shape<Dim>(prof.grid, prof.wulff_profile());
    r.gap_estimate = wulff_gap_estimate(*r.body);
  } catch (const EmptyWulff&) {
    r.empty = true;
  }
  r.profile = std::move(prof);
  return r;
}

template <int Dim>
FloatingBodyResult<Dim> floating_body(const ConvexBody<Dim>& k, double delta, double lambda,
                                      const DirectionGrid<Dim>& grid, const CapOptions& opt = {}) {
  const double mu = lambda_volume<Dim>(k, lambda, opt);
  if (!(delta > 0.0) || !(std::pow(delta, 0.5 * (Dim + 1)) < mu)) {
    throw OutOfRange("floating_body: delta must lie in (0, mu(K)^(2/(n+1)))");
  }
  return floating_body_from_profile<Dim>(cap_depth_profile<Dim>(k, grid, delta, lambda, mu, opt), mu);
}

template <int Dim>
FloatingBodyResult<Dim> floating_body(const ConvexBody<Dim>& k, double delta, double lambda) {
  return floating_body<Dim>(k, delta, lambda, default_direction_grid<Dim>());
}

/// δ₁ = δ(1 + λ tan^λ(d − α)²), δ₂ = δ(1 + λ tan^λ(d + β)²).
inline std::pair<double, double> sandwich_deltas(double delta, double lambda, double dist_origin_p, double alpha,
                                                 double beta) {
  if (!(alpha >= 0.0) || !(alpha < beta)) throw PreconditionError("sandwich_deltas: need 0 <= alpha < beta");
  const double t1 = tan_lambda(dist_origin_p - alpha, lambda);
  const double t2 = tan_lambda(dist_origin_p + beta, lambda);
  return {delta * (1.0 + lambda * t1 * t1), delta * (1.0 + lambda * t2 * t2)};
}

}  // namespace spaceform
