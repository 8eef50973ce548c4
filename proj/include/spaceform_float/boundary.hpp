#pragma once

#include <vector>

#include "spaceform_float/spaceform.hpp"

namespace spaceform {

/// Quadrature node on bd K with its Euclidean outer unit normal, Euclidean
/// Gauss–Kronecker curvature and Euclidean surface-measure weight.
template <int Dim>
struct BoundarySample {
  Vec<Dim> x;
  Vec<Dim> normal;
  double curvature = 0.0;
  double weight = 0.0;
};

template <int Dim>
using BoundaryQuadrature = std::vector<BoundarySample<Dim>>;

template <int Dim>
double total_weight(const BoundaryQuadrature<Dim>& q) {
  double s = 0.0;
  for (const auto& b : q) s += b.weight;
  return s;
}

}  // namespace spaceform
