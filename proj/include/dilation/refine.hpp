#pragma once

#include "dilation/transfer.hpp"

#include <map>

namespace dilation {

/// Recursive tile refinement: from scale-n tile values to scale-(n+1) values
/// by value_{n+1}(g) = sum_k p_k value_n(g - M^n k). Exact; the per-scale sum
/// of values is conserved because the coefficients sum to 1.
std::vector<TileValueMap> refine_values(const CoefficientMask& mask, const TileValueMap& base,
                                        unsigned depth);

/// Scale-0 tile values from the solved transfer system: the sum-normalized
/// exact 1-eigenvector placed on the observed tiles (extra tiles carry 0).
TileValueMap base_tile_values(const CoefficientMask& mask, const SolveResult& solved);

/// Step-function density: value * 2^n (a scale-n tile has Lebesgue measure
/// 2^-n on the line and on the plane, the twin dragon having unit area).
std::map<LatticeElem, double, LatticeLess> density_step(const TileValueMap& values);

/// The half-open tile system (a, a+1] on the line, extended by the tile
/// (-1, 0] so the lattice points of [0, K] are covered. For masks whose
/// solution has no atom at 0 the extended system forces mu(-1, 0] = 0; the
/// delta mask instead parks all mass there.
struct HalfOpenReport {
    std::vector<LatticeElem> tiles;  // z for (z, z+1], starting at z = -1
    QuadMatrix matrix;
    std::size_t eigenspace_dim = 0;
    bool solved = false;             // eigenspace is one-dimensional with nonzero mass
    bool extra_tile_forced_zero = false;
    std::vector<QuadScalar> values;  // mass-1 normalized tile values when solved
};

HalfOpenReport halfopen_consistency(const CoefficientMask& mask);

/// Floating diagnostic tying the two cascade variants together: aggregate the
/// scale-n discrete weights over scale-s tiles (s <= max_scale) and compare
/// with refine_values. Returns the largest absolute difference found.
double refine_cascade_gap(const CoefficientMask& mask, const SolveResult& solved, unsigned n,
                          unsigned max_scale, const CascadeLimits& limits = {});

/// CSV per the step-function export schema:
/// tile_key,address_or_interval,value_exact,density_float
std::string refine_csv(const std::vector<TileValueMap>& scales);

}  // namespace dilation
