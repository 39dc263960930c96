#include "dilation/cascade.hpp"

#include "dilation/parallel.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace dilation {

namespace {

// One forward step of the recursion: mass p_k * w(h) lands at M h + k.
DiscreteMeasure cascade_step(const CoefficientMask& mask, const DiscreteMeasure& mu,
                             unsigned workers, const CascadeLimits& limits) {
    DilationKind kind = mask.kind();
    std::vector<std::pair<LatticeElem, QuadScalar>> prev(mu.weights.begin(), mu.weights.end());
    auto parts = parallel_map_chunks<std::pair<LatticeElem, QuadScalar>, WeightMap>(
        prev, workers, [&](auto begin, auto end) {
            WeightMap acc;
            for (auto it = begin; it != end; ++it) {
                LatticeElem scaled = mul_M(kind, it->first);
                for (auto& [k, p] : mask.coeffs()) {
                    auto [slot, fresh] = acc.emplace(scaled + k, p * it->second);
                    if (!fresh) slot->second += p * it->second;
                }
            }
            return acc;
        });
    DiscreteMeasure next{mask.dilation(), mu.scale + 1, {}};
    for (auto& part : parts)
        for (auto& [g, w] : part) next.insert_add(g, w);
    next.prune_zeros();
    if (next.support_size() > limits.support_cap)
        throw ResourceLimit("cascade: support size exceeds cap at level " +
                            std::to_string(next.scale));
    return next;
}

}  // namespace

DiscreteMeasure iterate(const CoefficientMask& mask, unsigned n, unsigned workers,
                        const CascadeLimits& limits) {
    if (n < 1) throw std::invalid_argument("iterate: n must be >= 1");
    DiscreteMeasure mu = mask_mu1(mask);
    for (unsigned level = 2; level <= n; ++level) mu = cascade_step(mask, mu, workers, limits);
    return mu;
}

LatticeSet support_points(const CoefficientMask& mask, unsigned n, const CascadeLimits& limits) {
    if (n < 1) throw std::invalid_argument("support_points: n must be >= 1");
    DilationKind kind = mask.kind();
    LatticeSet points;
    for (auto& [k, p] : mask.coeffs()) points.insert(k);
    for (unsigned level = 2; level <= n; ++level) {
        LatticeSet next;
        for (LatticeElem g : points) {
            LatticeElem scaled = mul_M(kind, g);
            for (auto& [k, p] : mask.coeffs()) next.insert(scaled + k);
        }
        if (next.size() > limits.support_cap)
            throw ResourceLimit("support_points: cardinality exceeds cap");
        points = std::move(next);
    }
    return points;
}

SupportRadius support_radius(const CoefficientMask& mask) {
    std::int64_t m = mask.max_norm_sq();
    SupportRadius r;
    if (mask.dilation().is_line()) {
        // R = max|gamma| / (2 - 1); line digits are integers, so R^2 = m.
        r.radius_sq = QuadScalar(Rational(m));
        r.value = std::sqrt(static_cast<double>(m));
    } else {
        // R = max|gamma| / (sqrt(2) - 1), so R^2 = m (3 + 2 sqrt(2)).
        r.radius_sq = QuadScalar(Rational(3 * m), Rational(2 * m), 2);
        r.value = std::sqrt(static_cast<double>(m)) * (std::sqrt(2.0) + 1.0);
    }
    return r;
}

bool within_support_ball(const CoefficientMask& mask, unsigned scale, LatticeElem g) {
    // |M^-n g| <= R  <=>  |g|^2 <= R^2 |M|^(2n), decided exactly.
    QuadScalar scaled = support_radius(mask).radius_sq;
    QuadScalar factor(mask.dilation().norm_m_sq());
    for (unsigned i = 0; i < scale; ++i) scaled *= factor;
    return (scaled - QuadScalar(Rational(g.norm_sq()))).sign() >= 0;
}

DiscreteMeasure enumerate_oracle(const CoefficientMask& mask, unsigned n, unsigned workers,
                                 const CascadeLimits& limits) {
    if (n < 1) throw std::invalid_argument("enumerate_oracle: n must be >= 1");
    double total = std::pow(static_cast<double>(mask.coeffs().size()), static_cast<double>(n));
    if (total > static_cast<double>(limits.oracle_cap))
        throw ResourceLimit("enumerate_oracle: digit tuple count exceeds cap");

    std::vector<std::pair<LatticeElem, QuadScalar>> digits(mask.coeffs().begin(),
                                                           mask.coeffs().end());
    DilationKind kind = mask.kind();

    // Split across the first digit; each worker walks its subtrees depth-first.
    auto parts = parallel_map_chunks<std::pair<LatticeElem, QuadScalar>, WeightMap>(
        digits, workers, [&](auto begin, auto end) {
            WeightMap acc;
            auto walk = [&](auto&& self, LatticeElem key, const QuadScalar& weight,
                            unsigned depth) -> void {
                if (depth == n) {
                    auto [slot, fresh] = acc.emplace(key, weight);
                    if (!fresh) slot->second += weight;
                    return;
                }
                for (auto& [k, p] : digits) self(self, mul_M(kind, key) + k, weight * p, depth + 1);
            };
            for (auto it = begin; it != end; ++it) walk(walk, it->first, it->second, 1);
            return acc;
        });

    DiscreteMeasure out{mask.dilation(), n, {}};
    for (auto& part : parts)
        for (auto& [g, w] : part) out.insert_add(g, w);
    out.prune_zeros();
    return out;
}

ProbBoundsCheck verify_prob_bounds(const CoefficientMask& mask, unsigned n, unsigned workers,
                                   const CascadeLimits& limits) {
    ProbBoundsCheck check;
    if (!check_probability(mask).absolutely_continuous_criterion) {
        check.status = CheckStatus::NotApplicable;
        return check;
    }
    DiscreteMeasure mu = iterate(mask, n, workers, limits);
    QuadScalar bound(pow2_inverse(n));
    check.status = CheckStatus::Pass;
    for (auto& [g, w] : mu.weights) {
        if (w.sign() < 0 || (bound - w).sign() < 0) {
            check.status = CheckStatus::Fail;
            check.offender = g;
            check.offending_weight = w;
            return check;
        }
    }
    return check;
}

CheckStatus verify_sum_squares(const CoefficientMask& mask, unsigned n, unsigned workers,
                               const CascadeLimits& limits) {
    if (!check_orthonormality(mask).pass) return CheckStatus::NotApplicable;
    DiscreteMeasure mu = iterate(mask, n, workers, limits);
    QuadScalar sum;
    for (auto& [g, w] : mu.weights) sum += w * w;
    return sum == QuadScalar(pow2_inverse(n)) ? CheckStatus::Pass : CheckStatus::Fail;
}

std::vector<TvProfileRow> tv_profile(const CoefficientMask& mask, unsigned n_max, unsigned workers,
                                     const CascadeLimits& limits) {
    std::vector<TvProfileRow> rows;
    DiscreteMeasure mu;
    LatticeSet sn;
    for (unsigned n = 1; n <= n_max; ++n) {
        if (n == 1) {
            mu = mask_mu1(mask);
            for (auto& [k, p] : mask.coeffs()) sn.insert(k);
        } else {
            mu = cascade_step(mask, mu, workers, limits);
            LatticeSet next;
            for (LatticeElem g : sn) {
                LatticeElem scaled = mul_M(mask.kind(), g);
                for (auto& [k, p] : mask.coeffs()) next.insert(scaled + k);
            }
            if (next.size() > limits.support_cap)
                throw ResourceLimit("tv_profile: S_n cardinality exceeds cap");
            sn = std::move(next);
        }
        TvProfileRow row;
        row.n = n;
        row.card_support = sn.size();
        row.tv = tv_norm(mu);
        row.tv_float = row.tv.to_double();
        row.bound = std::sqrt(static_cast<double>(row.card_support) / std::pow(2.0, n));
        QuadScalar rhs(pow2_inverse(n) * Rational(static_cast<long>(row.card_support)));
        row.within_bound = (rhs - row.tv * row.tv).sign() >= 0;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string tv_profile_csv(const std::vector<TvProfileRow>& rows) {
    std::ostringstream out;
    out << "n,card_support,tv,tv_exact,bound\n";
    out.precision(15);
    for (auto& row : rows) {
        out << row.n << "," << row.card_support << "," << row.tv_float << ","
            << row.tv.to_string() << "," << row.bound << "\n";
    }
    return out.str();
}

FloatMeasure iterate_float(const CoefficientMask& mask, unsigned n, const CascadeLimits& limits) {
    if (n < 1) throw std::invalid_argument("iterate_float: n must be >= 1");
    FloatMeasure mu;
    mu.dilation = mask.dilation();
    mu.scale = n;

    if (mask.dilation().is_line()) {
        // Dense path: line supports are intervals of keys.
        std::int64_t k_lo = mask.coeffs().begin()->first.re;
        std::int64_t k_hi = mask.coeffs().rbegin()->first.re;
        std::vector<std::pair<std::int64_t, double>> digits;
        for (auto& [k, p] : mask.coeffs()) digits.emplace_back(k.re, p.to_double());

        std::int64_t lo = k_lo, hi = k_hi;
        std::vector<double> w(static_cast<std::size_t>(hi - lo + 1), 0.0);
        for (auto& [k, p] : digits) w[static_cast<std::size_t>(k - lo)] += p;
        for (unsigned level = 2; level <= n; ++level) {
            std::int64_t nlo = 2 * lo + k_lo, nhi = 2 * hi + k_hi;
            if (nhi - nlo + 1 > static_cast<std::int64_t>(limits.support_cap))
                throw ResourceLimit("iterate_float: support span exceeds cap");
            std::vector<double> next(static_cast<std::size_t>(nhi - nlo + 1), 0.0);
            for (std::int64_t g = lo; g <= hi; ++g) {
                double v = w[static_cast<std::size_t>(g - lo)];
                if (v == 0.0) continue;
                for (auto& [k, p] : digits) next[static_cast<std::size_t>(2 * g + k - nlo)] += p * v;
            }
            w = std::move(next);
            lo = nlo;
            hi = nhi;
        }
        mu.line_lo = lo;
        mu.line = std::move(w);
        return mu;
    }

    std::vector<std::pair<LatticeElem, double>> digits;
    for (auto& [k, p] : mask.coeffs()) digits.emplace_back(k, p.to_double());
    std::unordered_map<std::uint64_t, double> w;
    for (auto& [k, p] : digits) w[FloatMeasure::pack(k)] += p;
    for (unsigned level = 2; level <= n; ++level) {
        std::unordered_map<std::uint64_t, double> next;
        next.reserve(w.size() * 2);
        for (auto& [key, v] : w) {
            LatticeElem scaled = mul_M(mask.kind(), FloatMeasure::unpack(key));
            for (auto& [k, p] : digits) next[FloatMeasure::pack(scaled + k)] += p * v;
        }
        if (next.size() > limits.support_cap)
            throw ResourceLimit("iterate_float: support size exceeds cap");
        w = std::move(next);
    }
    mu.plane = std::move(w);
    return mu;
}

std::uint64_t FloatMeasure::pack(LatticeElem g) {
    auto lo = static_cast<std::uint64_t>(static_cast<std::uint32_t>(static_cast<std::int32_t>(g.re)));
    auto hi = static_cast<std::uint64_t>(static_cast<std::uint32_t>(static_cast<std::int32_t>(g.im)));
    return (hi << 32) | lo;
}

LatticeElem FloatMeasure::unpack(std::uint64_t key) {
    auto lo = static_cast<std::int32_t>(static_cast<std::uint32_t>(key & 0xffffffffu));
    auto hi = static_cast<std::int32_t>(static_cast<std::uint32_t>(key >> 32));
    return {lo, hi};
}

ConvergenceProbe convergence_probe(const CoefficientMask& mask, unsigned n_max,
                                   const CascadeLimits& limits) {
    ConvergenceProbe probe;
    double radius = std::max(support_radius(mask).value, 1.0);
    bool plane = mask.dilation().is_plane();

    std::vector<std::pair<std::string, std::function<double(double, double)>>> family;
    family.emplace_back("const_1", [](double, double) { return 1.0; });
    family.emplace_back("coord_x", [](double x, double) { return x; });
    if (plane) family.emplace_back("coord_y", [](double, double y) { return y; });
    family.emplace_back("bump_origin", [radius](double x, double y) {
        return std::exp(-(x * x + y * y) / (radius * radius));
    });
    for (auto& [name, fn] : family) probe.function_names.push_back(name);
    probe.gaps.resize(family.size());

    auto integrate = [&](const FloatMeasure& mu, unsigned scale) {
        std::vector<double> vals(family.size(), 0.0);
        auto accumulate = [&](LatticeElem g, double w) {
            double x, y = 0;
            if (plane) {
                double re = static_cast<double>(g.re), im = static_cast<double>(g.im);
                for (unsigned i = 0; i < scale; ++i) {  // apply (1+i)^-1 = (1-i)/2
                    double nr = (re + im) / 2.0;
                    double ni = (im - re) / 2.0;
                    re = nr;
                    im = ni;
                }
                x = re;
                y = im;
            } else {
                x = static_cast<double>(g.re) * std::pow(0.5, static_cast<double>(scale));
            }
            for (std::size_t i = 0; i < family.size(); ++i) vals[i] += w * family[i].second(x, y);
        };
        mu.for_each(accumulate);
        return vals;
    };

    std::vector<double> prev;
    for (unsigned n = 1; n <= n_max; ++n) {
        FloatMeasure mu = iterate_float(mask, n, limits);
        std::vector<double> cur = integrate(mu, n);
        if (n > 1) {
            probe.n_values.push_back(n - 1);
            for (std::size_t i = 0; i < cur.size(); ++i)
                probe.gaps[i].push_back(std::abs(cur[i] - prev[i]));
        }
        prev = std::move(cur);
    }
    return probe;
}

}  // namespace dilation
