#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "spaceform_float/boundary.hpp"
#include "spaceform_float/clipped.hpp"
#include "spaceform_float/direction_grid.hpp"
#include "spaceform_float/ellipsoid.hpp"
#include "spaceform_float/polytope.hpp"
#include "spaceform_float/smooth2d.hpp"
#include "spaceform_float/spaceform.hpp"

namespace spaceform {

/// Tagged convex body: ellipsoids (which include all geodesic balls) and
/// polytopes in both dimensions, plus the planar smooth and clipped families.
template <int Dim>
using ConvexBody = std::conditional_t<Dim == 2,
                                      std::variant<Ellipsoid<2>, Polytope<2>, Smooth2D, Clipped2D>,
                                      std::variant<Ellipsoid<3>, Polytope<3>>>;

template <int Dim>
double support(const ConvexBody<Dim>& k, const Vec<Dim>& v) {
  return std::visit([&](const auto& b) { return b.support(v); }, k);
}

/// tan^λ h^λ_0(K, v) = h_K(v).
template <int Dim>
double support_lambda(const ConvexBody<Dim>& k, const Vec<Dim>& v, double lambda) {
  return atan_lambda(support<Dim>(k, v), lambda);
}

template <int Dim>
double width(const ConvexBody<Dim>& k, const Vec<Dim>& v) {
  return support<Dim>(k, v) + support<Dim>(k, Vec<Dim>(-v));
}

template <int Dim>
double radial(const ConvexBody<Dim>& k, const Vec<Dim>& u) {
  return std::visit([&](const auto& b) { return b.radial(u); }, k);
}

template <int Dim>
bool contains(const ConvexBody<Dim>& k, const Vec<Dim>& x, double tol = 0.0) {
  return std::visit([&](const auto& b) { return b.contains(x, tol); }, k);
}

template <int Dim>
double bounding_radius(const ConvexBody<Dim>& k) {
  return std::visit([&](const auto& b) { return b.bounding_radius(); }, k);
}

template <int Dim>
std::vector<double> breakpoints(const ConvexBody<Dim>& k, const Vec<Dim>& v) {
  return std::visit([&](const auto& b) { return b.breakpoints(v); }, k);
}

template <int Dim>
double section_mass(const ConvexBody<Dim>& k, const Vec<Dim>& v, double t, double d_top, double d_bot,
                    double lambda) {
  return std::visit([&](const auto& b) { return b.section_mass(v, t, d_top, d_bot, lambda); }, k);
}

template <int Dim>
BoundaryQuadrature<Dim> boundary_quadrature(const ConvexBody<Dim>& k, int resolution, double phase = 0.0) {
  return std::visit([&](const auto& b) { return b.boundary_quadrature(resolution, phase); }, k);
}

template <int Dim>
bool is_polytope(const ConvexBody<Dim>& k) {
  return std::holds_alternative<Polytope<Dim>>(k);
}

template <int Dim>
std::string body_type(const ConvexBody<Dim>& k) {
  return std::visit(
      [](const auto& b) -> std::string {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid<Dim>>) return "ellipsoid";
        else if constexpr (std::is_same_v<T, Polytope<Dim>>) return "polytope";
        else if constexpr (std::is_same_v<T, Smooth2D>) return "smooth2d";
        else return "clipped2d";
      },
      k);
}

/// Throws DomainError unless the body lies strictly inside the model domain.
template <int Dim>
void require_in_model(const ConvexBody<Dim>& k, const SpaceForm<Dim>& space) {
  const double r = bounding_radius<Dim>(k);
  if (!(r < space.domain_radius())) {
    throw DomainError("body is not contained in the model domain of the space form");
  }
}

template <int Dim>
double hausdorff_distance(const ConvexBody<Dim>& k, const ConvexBody<Dim>& l, const DirectionGrid<Dim>& grid) {
  double d = 0.0;
  for (const auto& v : grid.dirs) d = std::max(d, std::abs(support<Dim>(k, v) - support<Dim>(l, v)));
  return d;
}

template <int Dim>
double hausdorff_distance(const ConvexBody<Dim>& k, const ConvexBody<Dim>& l) {
  return hausdorff_distance<Dim>(k, l, default_direction_grid<Dim>());
}

}  // namespace spaceform
