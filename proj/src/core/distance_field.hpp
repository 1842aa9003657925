#pragma once
// Euclidean distance transform over occupied voxels: d(v) = distance from v
// to the nearest surface voxel. Squared distances are exact 64-bit integers;
// the square root is taken once at the boundary.

#include <cstdint>
#include <vector>

#include "voxel_grid.hpp"

namespace skelgrid {

struct DistanceField {
    std::vector<int64_t> d2;  // exact squared distance per node
    std::vector<double> d;    // sqrt(d2)
    int64_t d2_max = 0;
    double d_max = 0.0;
};

// Separable three-axis sweep restricted to the occupied set (x nearest-site
// scan, then two parabola-envelope passes). Exact: equals the brute-force
// nearest-surface-voxel search in integer squared distance.
DistanceField distance_transform(const VoxelGrid& grid, const SurfaceMask& mask);

// w(v) = d_max - d(v), using the field's global maximum.
std::vector<double> weights_from_distance(const DistanceField& field);

}  // namespace skelgrid
