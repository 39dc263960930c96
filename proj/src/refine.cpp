#include "dilation/refine.hpp"

#include <cmath>
#include <sstream>

namespace dilation {

std::vector<TileValueMap> refine_values(const CoefficientMask& mask, const TileValueMap& base,
                                        unsigned depth) {
    std::vector<TileValueMap> scales;
    const TileValueMap* current = &base;
    LatticeElem m_pow{1, 0};  // M^n for n = current scale
    for (unsigned s = 0; s < base.scale; ++s) m_pow = mul_M(mask.kind(), m_pow);

    for (unsigned step = 0; step < depth; ++step) {
        TileValueMap next;
        next.dilation = mask.dilation();
        next.scale = current->scale + 1;
        for (auto& [g, v] : current->values) {
            for (auto& [k, p] : mask.coeffs()) {
                // value_{n+1}(g + M^n k) accumulates p_k value_n(g)
                LatticeElem shift{m_pow.re * k.re - m_pow.im * k.im,
                                  m_pow.re * k.im + m_pow.im * k.re};
                LatticeElem target = g + shift;
                auto [slot, fresh] = next.values.emplace(target, p * v);
                if (!fresh) slot->second += p * v;
            }
        }
        for (auto it = next.values.begin(); it != next.values.end();) {
            if (it->second.is_zero())
                it = next.values.erase(it);
            else
                ++it;
        }
        scales.push_back(std::move(next));
        current = &scales.back();
        m_pow = mul_M(mask.kind(), m_pow);
    }
    return scales;
}

TileValueMap base_tile_values(const CoefficientMask& mask, const SolveResult& solved) {
    if (solved.eigenvectors.size() != 1)
        throw std::domain_error("base_tile_values: 1-eigenspace is not one-dimensional");
    std::vector<QuadScalar> v = normalize_eigenvector(solved.eigenvectors[0], NormalizeMode::Sum1);
    TileValueMap base;
    base.dilation = mask.dilation();
    base.scale = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_zero()) base.values.emplace(solved.tiles.translates[i], v[i]);
    }
    return base;
}

std::map<LatticeElem, double, LatticeLess> density_step(const TileValueMap& values) {
    double factor = std::pow(2.0, static_cast<double>(values.scale));
    std::map<LatticeElem, double, LatticeLess> out;
    for (auto& [g, v] : values.values) out.emplace(g, v.to_double() * factor);
    return out;
}

HalfOpenReport halfopen_consistency(const CoefficientMask& mask) {
    if (!mask.dilation().is_line())
        throw std::invalid_argument("halfopen_consistency: line masks only");
    std::int64_t lo = mask.coeffs().begin()->first.re;
    std::int64_t hi = mask.coeffs().rbegin()->first.re;
    if (lo < 0)
        throw std::invalid_argument("halfopen_consistency: mask support must lie in {0..K}");

    HalfOpenReport report;
    for (std::int64_t z = -1; z <= hi - 1; ++z) report.tiles.push_back({z, 0});
    TileSystem tiles(mask.dilation(), report.tiles);
    // A half-open tile (z, z+1] outside (-1, K] misses supp(mu), which lies
    // in [0, K]; discards beyond the list are therefore certified.
    auto certified = [&](LatticeElem z) { return z.re < -1 || z.re > hi - 1; };
    report.matrix = build_matrix(tiles, mask, certified).matrix;

    auto kernel = one_eigenvectors(report.matrix);
    report.eigenspace_dim = kernel.size();
    if (kernel.size() == 1) {
        QuadScalar mass;
        for (auto& x : kernel[0]) mass += x;
        if (!mass.is_zero()) {
            report.values = normalize_eigenvector(kernel[0], NormalizeMode::Sum1);
            report.solved = true;
            report.extra_tile_forced_zero = report.values.front().is_zero();
        }
    }
    return report;
}

namespace {

std::int64_t floor_div_pow2(std::int64_t g, unsigned m) {
    std::int64_t d = std::int64_t(1) << m;
    std::int64_t q = g / d;
    if (g % d != 0 && g < 0) --q;
    return q;
}

}  // namespace

double refine_cascade_gap(const CoefficientMask& mask, const SolveResult& solved, unsigned n,
                          unsigned max_scale, const CascadeLimits& limits) {
    if (max_scale >= n) throw std::invalid_argument("refine_cascade_gap: need max_scale < n");
    TileValueMap base = base_tile_values(mask, solved);
    std::vector<TileValueMap> refined = refine_values(mask, base, max_scale);

    FloatMeasure mu = iterate_float(mask, n, limits);
    double worst = 0;
    for (unsigned s = 0; s <= max_scale; ++s) {
        const TileValueMap& exact = s == 0 ? base : refined[s - 1];
        std::map<LatticeElem, double, LatticeLess> agg;
        unsigned steps = n - s;
        mu.for_each([&](LatticeElem g, double w) {
            LatticeElem tile;
            if (mask.dilation().is_line())
                tile = {floor_div_pow2(g.re, steps), 0};
            else
                tile = greedy_split(mask.kind(), g, steps).residue;
            agg[tile] += w;
        });
        for (auto& [g, v] : exact.values)
            worst = std::max(worst, std::abs(v.to_double() - (agg.count(g) ? agg.at(g) : 0.0)));
        for (auto& [g, w] : agg)
            if (!exact.values.count(g)) worst = std::max(worst, std::abs(w));
    }
    return worst;
}

std::string refine_csv(const std::vector<TileValueMap>& scales) {
    std::ostringstream out;
    out << "scale,tile_key,address_or_interval,value_exact,density_float\n";
    out.precision(15);
    for (auto& values : scales) {
        double factor = std::pow(2.0, static_cast<double>(values.scale));
        for (auto& [g, v] : values.values) {
            out << values.scale << "," << lattice_to_string(values.dilation.kind, g) << ",";
            if (values.dilation.is_line()) {
                Rational width = pow2_inverse(values.scale);
                Rational left = Rational(g.re) * width;
                Rational right = left + width;
                out << "[" << left.to_string() << ";" << right.to_string() << ")";
            } else {
                GreedySplit split = greedy_split(values.dilation.kind, g, values.scale);
                out << lattice_to_string(values.dilation.kind, split.residue) << ":"
                    << split.address.to_string();
            }
            out << "," << v.to_string() << "," << v.to_double() * factor << "\n";
        }
    }
    return out.str();
}

}  // namespace dilation
