#pragma once

#include "dilation/cascade.hpp"
#include "dilation/exact_matrix.hpp"

#include <functional>
#include <optional>

namespace dilation {

/// Ordered list of tile translates z (each naming the tile z + T). The order
/// is part of the value: it fixes matrix row/column indexing and is a stored
/// input when reproducing a published system, never re-derived.
struct TileSystem {
    Dilation dilation;
    std::vector<LatticeElem> translates;

    TileSystem() = default;
    TileSystem(Dilation dilation, std::vector<LatticeElem> translates);

    std::optional<std::size_t> index_of(LatticeElem z) const;

    /// One translate per line, LatticeElem text form.
    std::string to_text() const;
    static TileSystem from_text(Dilation dilation, const std::string& text);
};

/// Conservative candidate ball: every translate z with tile z + T meeting the
/// attractor satisfies |z| <= B, B = max |gamma - delta| * |M| / (|M| - 1)
/// over mask digits gamma and delta in {0, 1}. The squared bound is exact
/// (rational on the line, in Q(sqrt(2)) on the plane).
struct CandidateSet {
    double bound = 0;
    QuadScalar bound_sq;
    std::vector<LatticeElem> elems;  // deterministic order
};

CandidateSet candidate_translates(const CoefficientMask& mask);

/// Translates certified to meet the support: the greedy residue of every
/// point of S_n. A subset of the true translate set; boundary lattice points
/// land in exactly one adjacent tile.
LatticeSet observed_translates(const CoefficientMask& mask, unsigned n,
                               const CascadeLimits& limits = {});

/// Coefficients of mu(z + T) = sum_{z'} row[z'] mu(z' + T) under one
/// application of the dilation equation: z' collects every p_k with
/// M z - k + delta = z', delta in {0, 1}. Zero sums are dropped.
WeightMap dependency_row(const CoefficientMask& mask, LatticeElem z);

/// Fixed point elimination: a candidate survives while some dependency chain
/// from it stays inside the candidate set. Every eliminated translate has
/// mu(z + T) = 0 (on every Borel subset).
LatticeSet push_out(const CoefficientMask& mask, const std::vector<LatticeElem>& candidates);

struct TransferMatrix {
    TileSystem tiles;
    QuadMatrix matrix;  // row i: mu(z_i + T) = sum_j matrix(i, j) mu(z_j + T)
    /// Dependencies that fell outside the tile list without a zero
    /// certificate; empty in a sound construction.
    std::vector<LatticeElem> uncertified_discards;
};

using ZeroCertificate = std::function<bool(LatticeElem)>;

/// Assemble the transfer matrix over the given tiles. A dependency outside
/// the list is discarded; unless certified_zero says the target carries no
/// measure, the discard is recorded as a warning.
TransferMatrix build_matrix(const TileSystem& tiles, const CoefficientMask& mask,
                            const ZeroCertificate& certified_zero = nullptr);

/// Exact basis of the right 1-eigenspace, i.e. the kernel of (A - I).
std::vector<std::vector<QuadScalar>> one_eigenvectors(const QuadMatrix& a);

enum class NormalizeMode { Sum1, First1, Unit };

/// Exact sum-to-1 or first-component-1 normalization.
std::vector<QuadScalar> normalize_eigenvector(const std::vector<QuadScalar>& v, NormalizeMode mode);
/// Floating-point unit (l2) normalization with a sign convention: the entry
/// of largest magnitude is made positive.
std::vector<double> normalize_eigenvector_unit(const std::vector<QuadScalar>& v);

/// The whole tile pipeline for one mask: candidates, observed translates at
/// the probe depth, push-out survivors, the full transfer system over the
/// survivors, the block reduction certifying zero tiles, and the exact
/// 1-eigenspace of the reduced system.
struct SolveResult {
    CandidateSet candidates;
    std::vector<LatticeElem> observed;  // prefix of tiles.translates, in tile order
    TileSystem tiles;                   // all survivors: observed first, then extras
    QuadMatrix full_matrix;             // over tiles
    bool lower_left_zero = false;       // no extra-tile equation touches an observed tile
    QuadScalar det_extra_minus_i;       // det(A' - I) over the extra block; 1 if empty
    bool reduced = false;               // extra tiles certified zero, system reduced
    QuadMatrix matrix;                  // the system the eigenproblem ran on
    std::vector<std::vector<QuadScalar>> eigenvectors;  // kernel of (matrix - I)
    std::vector<LatticeElem> uncertified_discards;
};

/// stored_order, when given, must enumerate exactly the surviving translates,
/// observed ones first; it pins row/column order to a published convention.
SolveResult solve_tile_system(const CoefficientMask& mask, unsigned probe_depth = 12,
                              const CascadeLimits& limits = {},
                              const std::vector<LatticeElem>* stored_order = nullptr);

/// One sampled verification of the determinant identity
/// det(A' - I) = 1 - p0^3 p1 p_{1+i} p_{2+i}^3 for the four-coefficient
/// plane family on supports {0, 1, 1+i, 2+i}.
struct DetIdentitySample {
    std::vector<Rational> p;  // p0, p1, p_{1+i}, p_{2+i}
    QuadScalar det;
    QuadScalar expected;
    bool pass = false;
};

std::vector<DetIdentitySample> det_identity_check(std::size_t sample_count, std::uint64_t seed);

/// The identity evaluated at one explicit coefficient choice (exact scalars,
/// e.g. the D4 lift).
DetIdentitySample det_identity_at(const std::vector<QuadScalar>& p, int field_d);

}  // namespace dilation
