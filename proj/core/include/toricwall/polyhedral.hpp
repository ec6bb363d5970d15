#pragma once

#include <optional>
#include <vector>

#include "toricwall/exact.hpp"

namespace tw {

// Extreme rays of the pointed cone {x : a.x >= 0 for a in ineq} by the double
// description method. Rays are primitive integer vectors, sorted.
std::vector<QVec> extreme_rays(const std::vector<QVec>& ineq, int dim);

// Inward facet normals of cone(gens). The cone must be full-dimensional.
std::vector<QVec> facets_of(const std::vector<QVec>& gens, int dim);

// Extreme rays of cone(gens) for a pointed cone of any dimension.
std::vector<QVec> extreme_rays_of(const std::vector<QVec>& gens, int dim);

bool in_cone(const std::vector<QVec>& facets, const QVec& x);

// Same primitive ray sets (order-insensitive).
bool same_rays(std::vector<QVec> a, std::vector<QVec> b);

// Simplicial subdivision of a full-dimensional pointed cone without new rays.
std::vector<std::vector<int>> triangulate(const std::vector<QVec>& rays, int dim);

// Lattice points of the half-open parallelepiped sum [0,1) g_i, for
// linearly independent integer generators (rows) spanning Q^k.
std::vector<ZVec> parallelepiped_points(const ZMat& gens);

// Hilbert basis of cone(rays) intersected with Z^dim (full-dimensional pointed).
std::vector<ZVec> hilbert_basis(const std::vector<QVec>& rays, int dim);

// Exact feasibility: some x with ge * x >= bge and eq * x = beq.
std::optional<QVec> lp_feasible(const QMat& ge, const QVec& bge, const QMat& eq, const QVec& beq, int n);

}  // namespace tw
