#include "dilation/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace dilation {

TileSystem::TileSystem(Dilation dilation_, std::vector<LatticeElem> translates_)
    : dilation(dilation_), translates(std::move(translates_)) {
    LatticeSet seen;
    for (LatticeElem z : translates) {
        if (!seen.insert(z).second)
            throw std::invalid_argument("TileSystem: duplicate translate " +
                                        lattice_to_string(dilation.kind, z));
    }
}

std::optional<std::size_t> TileSystem::index_of(LatticeElem z) const {
    for (std::size_t i = 0; i < translates.size(); ++i)
        if (translates[i] == z) return i;
    return std::nullopt;
}

std::string TileSystem::to_text() const {
    std::ostringstream out;
    for (LatticeElem z : translates) out << lattice_to_string(dilation.kind, z) << "\n";
    return out.str();
}

TileSystem TileSystem::from_text(Dilation dilation, const std::string& text) {
    std::vector<LatticeElem> translates;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        translates.push_back(lattice_parse(dilation.kind, line));
    }
    return TileSystem(dilation, std::move(translates));
}

CandidateSet candidate_translates(const CoefficientMask& mask) {
    // max |gamma - delta|^2 over mask digits gamma, canonical digits delta
    std::int64_t diff_sq = 0;
    for (auto& [k, p] : mask.coeffs())
        for (std::int64_t delta : {0, 1})
            diff_sq = std::max(diff_sq, (k - LatticeElem{delta, 0}).norm_sq());

    CandidateSet out;
    if (mask.dilation().is_line()) {
        // B = maxdiff * 2 / (2 - 1), so B^2 = 4 diff_sq.
        out.bound_sq = QuadScalar(Rational(4 * diff_sq));
        out.bound = 2.0 * std::sqrt(static_cast<double>(diff_sq));
    } else {
        // B = maxdiff * sqrt(2) / (sqrt(2) - 1), so B^2 = diff_sq (6 + 4 sqrt(2)).
        out.bound_sq = QuadScalar(Rational(6 * diff_sq), Rational(4 * diff_sq), 2);
        out.bound = std::sqrt(static_cast<double>(diff_sq)) * std::sqrt(2.0) /
                    (std::sqrt(2.0) - 1.0);
    }

    auto inside = [&](LatticeElem z) {
        return (out.bound_sq - QuadScalar(Rational(z.norm_sq()))).sign() >= 0;
    };
    std::int64_t box = 0;
    while ((out.bound_sq - QuadScalar(Rational((box + 1) * (box + 1)))).sign() >= 0) ++box;
    if (mask.dilation().is_line()) {
        for (std::int64_t x = -box; x <= box; ++x)
            if (inside({x, 0})) out.elems.push_back({x, 0});
    } else {
        for (std::int64_t x = -box; x <= box; ++x)
            for (std::int64_t y = -box; y <= box; ++y)
                if (inside({x, y})) out.elems.push_back({x, y});
    }
    return out;
}

LatticeSet observed_translates(const CoefficientMask& mask, unsigned n,
                               const CascadeLimits& limits) {
    LatticeSet out;
    for (LatticeElem g : support_points(mask, n, limits))
        out.insert(greedy_split(mask.kind(), g, n).residue);
    return out;
}

WeightMap dependency_row(const CoefficientMask& mask, LatticeElem z) {
    WeightMap row;
    LatticeElem mz = mul_M(mask.kind(), z);
    for (auto& [k, p] : mask.coeffs()) {
        for (std::int64_t delta : {0, 1}) {
            LatticeElem target = mz - k + LatticeElem{delta, 0};
            auto [slot, fresh] = row.emplace(target, p);
            if (!fresh) slot->second += p;
        }
    }
    for (auto it = row.begin(); it != row.end();) {
        if (it->second.is_zero())
            it = row.erase(it);
        else
            ++it;
    }
    return row;
}

LatticeSet push_out(const CoefficientMask& mask, const std::vector<LatticeElem>& candidates) {
    LatticeSet alive(candidates.begin(), candidates.end());
    std::map<LatticeElem, std::vector<LatticeElem>, LatticeLess> deps;
    for (LatticeElem z : alive) {
        std::vector<LatticeElem> targets;
        for (auto& [zp, c] : dependency_row(mask, z)) targets.push_back(zp);
        deps.emplace(z, std::move(targets));
    }
    // Greatest fixed point: drop z once every dependency has left the set.
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = alive.begin(); it != alive.end();) {
            bool keeps = false;
            for (LatticeElem zp : deps.at(*it))
                if (alive.count(zp)) {
                    keeps = true;
                    break;
                }
            if (!keeps) {
                it = alive.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }
    return alive;
}

TransferMatrix build_matrix(const TileSystem& tiles, const CoefficientMask& mask,
                            const ZeroCertificate& certified_zero) {
    std::map<LatticeElem, std::size_t, LatticeLess> index;
    for (std::size_t i = 0; i < tiles.translates.size(); ++i) index.emplace(tiles.translates[i], i);

    TransferMatrix out;
    out.tiles = tiles;
    out.matrix = QuadMatrix(tiles.translates.size(), tiles.translates.size());
    LatticeSet warned;
    for (std::size_t i = 0; i < tiles.translates.size(); ++i) {
        for (auto& [zp, coeff] : dependency_row(mask, tiles.translates[i])) {
            auto slot = index.find(zp);
            if (slot != index.end()) {
                out.matrix(i, slot->second) += coeff;
            } else if (!(certified_zero && certified_zero(zp))) {
                if (warned.insert(zp).second) out.uncertified_discards.push_back(zp);
            }
        }
    }
    return out;
}

std::vector<std::vector<QuadScalar>> one_eigenvectors(const QuadMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("one_eigenvectors: matrix not square");
    return kernel_basis(a - QuadMatrix::identity(a.rows()));
}

std::vector<QuadScalar> normalize_eigenvector(const std::vector<QuadScalar>& v,
                                              NormalizeMode mode) {
    if (v.empty()) throw std::invalid_argument("normalize_eigenvector: empty vector");
    QuadScalar norm;
    if (mode == NormalizeMode::Sum1) {
        for (auto& x : v) norm += x;
    } else if (mode == NormalizeMode::First1) {
        norm = v.front();
    } else {
        throw std::invalid_argument("normalize_eigenvector: unit mode is floating point, use "
                                    "normalize_eigenvector_unit");
    }
    if (norm.is_zero()) throw std::domain_error("normalize_eigenvector: zero normalizer");
    QuadScalar inv = norm.inverse();
    std::vector<QuadScalar> out;
    out.reserve(v.size());
    for (auto& x : v) out.push_back(x * inv);
    return out;
}

std::vector<double> normalize_eigenvector_unit(const std::vector<QuadScalar>& v) {
    if (v.empty()) throw std::invalid_argument("normalize_eigenvector_unit: empty vector");
    std::vector<double> out;
    out.reserve(v.size());
    double norm_sq = 0;
    for (auto& x : v) {
        double f = x.to_double();
        out.push_back(f);
        norm_sq += f * f;
    }
    if (norm_sq == 0) throw std::domain_error("normalize_eigenvector_unit: zero normalizer");
    double inv = 1.0 / std::sqrt(norm_sq);
    double top = 0;
    for (double f : out) top = std::abs(f) > std::abs(top) ? f : top;
    if (top < 0) inv = -inv;
    for (double& f : out) f *= inv;
    return out;
}

SolveResult solve_tile_system(const CoefficientMask& mask, unsigned probe_depth,
                              const CascadeLimits& limits,
                              const std::vector<LatticeElem>* stored_order) {
    SolveResult result;
    result.candidates = candidate_translates(mask);
    LatticeSet observed = observed_translates(mask, probe_depth, limits);
    LatticeSet survivors = push_out(mask, result.candidates.elems);
    for (LatticeElem z : observed) {
        if (!survivors.count(z))
            throw std::logic_error("observed translate missing from push-out survivors");
    }

    std::vector<LatticeElem> order;
    if (stored_order) {
        if (stored_order->size() != survivors.size())
            throw std::invalid_argument("stored tile order does not enumerate the survivors");
        LatticeSet seen;
        for (std::size_t i = 0; i < stored_order->size(); ++i) {
            LatticeElem z = (*stored_order)[i];
            if (!survivors.count(z) || !seen.insert(z).second)
                throw std::invalid_argument("stored tile order does not match the survivors");
            bool in_observed = observed.count(z) > 0;
            if (in_observed != (i < observed.size()))
                throw std::invalid_argument("stored tile order must list observed translates first");
        }
        order = *stored_order;
    } else {
        for (LatticeElem z : observed) order.push_back(z);
        for (LatticeElem z : survivors)
            if (!observed.count(z)) order.push_back(z);
    }
    result.observed.assign(order.begin(), order.begin() + static_cast<long>(observed.size()));
    result.tiles = TileSystem(mask.dilation(), order);

    // Discards are sound here: everything outside the survivors is either
    // outside the candidate ball or was pushed out, and both certify zero.
    auto certified = [&](LatticeElem z) { return survivors.count(z) == 0; };
    TransferMatrix built = build_matrix(result.tiles, mask, certified);
    result.full_matrix = built.matrix;
    result.uncertified_discards = built.uncertified_discards;

    std::size_t m = observed.size();
    std::size_t extra = order.size() - m;
    result.lower_left_zero = true;
    for (std::size_t i = m; i < order.size(); ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (!result.full_matrix(i, j).is_zero()) result.lower_left_zero = false;

    if (extra == 0) {
        result.det_extra_minus_i = QuadScalar(1);
        result.reduced = true;
        result.matrix = result.full_matrix;
    } else {
        QuadMatrix lower = result.full_matrix.block(m, m, extra, extra);
        result.det_extra_minus_i = determinant(lower - QuadMatrix::identity(extra));
        if (result.lower_left_zero && !result.det_extra_minus_i.is_zero()) {
            // 1 is not an eigenvalue of the extra block, so the extra tile
            // values of any 1-eigenvector vanish; solve the observed block.
            result.reduced = true;
            result.matrix = result.full_matrix.block(0, 0, m, m);
        } else {
            result.reduced = false;
            result.matrix = result.full_matrix;
        }
    }
    result.eigenvectors = one_eigenvectors(result.matrix);
    return result;
}

namespace {

CoefficientMask four_coefficient_mask(const std::vector<QuadScalar>& p, int field_d) {
    if (p.size() != 4) throw std::invalid_argument("four-coefficient family needs 4 values");
    WeightMap coeffs;
    coeffs.emplace(LatticeElem{0, 0}, p[0]);
    coeffs.emplace(LatticeElem{1, 0}, p[1]);
    coeffs.emplace(LatticeElem{1, 1}, p[2]);
    coeffs.emplace(LatticeElem{2, 1}, p[3]);
    return CoefficientMask(Dilation{DilationKind::TwinDragonPlane}, field_d, coeffs);
}

// The extra-block tile list for supports {0, 1, 1+i, 2+i}, derived once from
// a generic positive mask on the same support (structure depends only on the
// support; positive coefficients rule out cancellation).
const std::vector<LatticeElem>& four_coeff_extra_tiles() {
    static const std::vector<LatticeElem> extra = [] {
        CoefficientMask generic = four_coefficient_mask(
            {QuadScalar(1, 2), QuadScalar(1, 4), QuadScalar(1, 8), QuadScalar(1, 8)}, 3);
        LatticeSet observed = observed_translates(generic, 12);
        LatticeSet survivors = push_out(generic, candidate_translates(generic).elems);
        std::vector<LatticeElem> out;
        for (LatticeElem z : survivors)
            if (!observed.count(z)) out.push_back(z);
        return out;
    }();
    return extra;
}

// Entries are evaluated directly from the sampled coefficients over the
// structural tile list; zero coefficients are legal members of the family.
DetIdentitySample evaluate_det_identity(const std::vector<QuadScalar>& p,
                                        const std::vector<LatticeElem>& extra_tiles) {
    std::vector<LatticeElem> support{{0, 0}, {1, 0}, {1, 1}, {2, 1}};

    std::map<LatticeElem, std::size_t, LatticeLess> index;
    for (std::size_t i = 0; i < extra_tiles.size(); ++i) index.emplace(extra_tiles[i], i);

    std::size_t n = extra_tiles.size();
    QuadMatrix lower(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        LatticeElem mz = mul_M(DilationKind::TwinDragonPlane, extra_tiles[i]);
        for (std::size_t s = 0; s < support.size(); ++s) {
            for (std::int64_t delta : {0, 1}) {
                LatticeElem target = mz - support[s] + LatticeElem{delta, 0};
                auto slot = index.find(target);
                if (slot != index.end()) lower(i, slot->second) += p[s];
            }
        }
    }

    DetIdentitySample out;
    out.det = determinant(lower - QuadMatrix::identity(n));
    out.expected = QuadScalar(1) - p[0].pow(3) * p[1] * p[2] * p[3].pow(3);
    out.pass = out.det == out.expected;
    return out;
}

}  // namespace

DetIdentitySample det_identity_at(const std::vector<QuadScalar>& p, int field_d) {
    (void)field_d;
    return evaluate_det_identity(p, four_coeff_extra_tiles());
}

std::vector<DetIdentitySample> det_identity_check(std::size_t sample_count, std::uint64_t seed) {
    const std::vector<LatticeElem>& extra = four_coeff_extra_tiles();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> den_dist(2, 24);
    std::vector<DetIdentitySample> samples;
    for (std::size_t s = 0; s < sample_count; ++s) {
        std::vector<Rational> p;
        Rational sum(0);
        for (int i = 0; i < 3; ++i) {
            int den = den_dist(rng);
            std::uniform_int_distribution<int> num_dist(1, den - 1);
            Rational r(num_dist(rng), den);
            p.push_back(r);
            sum += r;
        }
        p.push_back(Rational(1) - sum);
        std::vector<QuadScalar> scalars(p.begin(), p.end());
        DetIdentitySample sample = evaluate_det_identity(scalars, extra);
        sample.p = p;
        samples.push_back(std::move(sample));
    }
    return samples;
}

}  // namespace dilation
