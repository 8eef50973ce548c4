#pragma once

#include <algorithm>
#include <vector>

#include "spaceform_float/body.hpp"
#include "spaceform_float/direction_grid.hpp"
#include "spaceform_float/errors.hpp"
#include "spaceform_float/polytope.hpp"

namespace spaceform {

/// Wulff shape [f] = ⋂_i {x : x·v_i <= f_i} over a finite grid. This is an
/// outer approximation of the shape over the whole sphere. Throws EmptyWulff
/// when the intersection is empty.
template <int Dim>
Polytope<Dim> wulff_shape(const DirectionGrid<Dim>& grid, const std::vector<double>& profile) {
  if (grid.size() != profile.size()) throw PreconditionError("wulff_shape: profile/grid size mismatch");
  if (grid.size() < static_cast<std::size_t>(Dim + 1)) {
    throw PreconditionError("wulff_shape: grid must positively span");
  }
  std::vector<Halfspace<Dim>> hs;
  hs.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) hs.push_back({grid.dirs[i], profile[i]});
  if constexpr (Dim == 2) {
    auto p = Polytope<2>::halfplane_intersection(hs);
    if (!p) throw EmptyWulff("wulff_shape: the intersection of halfspaces is empty");
    return *p;
  } else {
    auto p = Polytope<3>::halfspace_intersection(hs);
    if (!p) throw EmptyWulff("wulff_shape: the intersection of halfspaces is empty");
    return *p;
  }
}

/// Samples h_K on the grid.
template <int Dim>
std::vector<double> support_profile(const ConvexBody<Dim>& k, const DirectionGrid<Dim>& grid) {
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = support<Dim>(k, grid.dirs[i]);
  return f;
}

/// Hausdorff gap estimate between the discrete Wulff polygon and the smooth
/// shape it approximates: how far each vertex lies beyond the mean offset of
/// its two edges, measured along their bisector.
inline double wulff_gap_estimate(const Polytope<2>& p) {
  double gap = 0.0;
  const auto& verts = p.vertices();
  const auto& normals = p.normals();
  const auto& offsets = p.offsets();
  const std::size_t m = verts.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t prev = (i + m - 1) % m;
    const Vec<2> bis = (normals[prev] + normals[i]).normalized();
    gap = std::max(gap, verts[i].dot(bis) - 0.5 * (offsets[prev] + offsets[i]));
  }
  return gap;
}

/// Same estimate in space, over the facets meeting at each vertex.
inline double wulff_gap_estimate(const Polytope<3>& p) {
  double gap = 0.0;
  const auto& verts = p.vertices();
  std::vector<Vec<3>> nsum(verts.size(), Vec<3>::Zero());
  std::vector<double> osum(verts.size(), 0.0);
  std::vector<int> count(verts.size(), 0);
  for (const auto& f : p.faces()) {
    for (int idx : f.loop) {
      nsum[idx] += f.normal;
      osum[idx] += f.offset;
      ++count[idx];
    }
  }
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (count[i] == 0) continue;
    const Vec<3> bis = nsum[i].normalized();
    gap = std::max(gap, verts[i].dot(bis) - osum[i] / count[i]);
  }
  return gap;
}

}  // namespace spaceform
