#pragma once

#include "dilation/measure.hpp"

#include <set>
#include <unordered_map>

namespace dilation {

/// Exceeding a configured resource cap is an error, never silent truncation.
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CascadeLimits {
    std::size_t support_cap = 5'000'000;  // keys per level in iterate/support_points
    std::size_t oracle_cap = 1'000'000;   // digit tuples in enumerate_oracle
};

/// mu_n, computed by the one-step recursion w_n(g) accumulating
/// p_k * w_{n-1}(h) at g = M h + k. Exact; total mass 1; supp within S_n.
DiscreteMeasure iterate(const CoefficientMask& mask, unsigned n, unsigned workers = 1,
                        const CascadeLimits& limits = {});

using LatticeSet = std::set<LatticeElem, LatticeLess>;

/// S_n as scale-n keys: every sum of n mask digits, including points whose
/// weight cancels to zero.
LatticeSet support_points(const CoefficientMask& mask, unsigned n, const CascadeLimits& limits = {});

/// Radius R = max |gamma| / (|M| - 1) of the ball containing every S_n.
/// The square is exact: rational on the line, an element of Q(sqrt(2)) on the
/// plane (kept in its own field, never mixed with mask scalars).
struct SupportRadius {
    double value = 0;
    QuadScalar radius_sq;
};

SupportRadius support_radius(const CoefficientMask& mask);

/// Exact test |M^-n g| <= R for a scale-n key.
bool within_support_ball(const CoefficientMask& mask, unsigned scale, LatticeElem g);

/// Brute-force evaluation of w_n by enumerating all |support|^n digit tuples
/// and accumulating coefficient products. The independent oracle for iterate.
DiscreteMeasure enumerate_oracle(const CoefficientMask& mask, unsigned n, unsigned workers = 1,
                                 const CascadeLimits& limits = {});

enum class CheckStatus { Pass, Fail, NotApplicable };

/// 0 <= w_n(x) <= 2^-n, exact, for masks passing the probability conditions.
struct ProbBoundsCheck {
    CheckStatus status = CheckStatus::NotApplicable;
    LatticeElem offender{};  // meaningful when status == Fail
    QuadScalar offending_weight;
};

ProbBoundsCheck verify_prob_bounds(const CoefficientMask& mask, unsigned n, unsigned workers = 1,
                                   const CascadeLimits& limits = {});

/// sum_x w_n(x)^2 == 2^-n, exact, for masks passing the orthonormality conditions.
CheckStatus verify_sum_squares(const CoefficientMask& mask, unsigned n, unsigned workers = 1,
                               const CascadeLimits& limits = {});

struct TvProfileRow {
    unsigned n = 0;
    std::size_t card_support = 0;  // card(S_n)
    QuadScalar tv;
    double tv_float = 0;
    double bound = 0;          // sqrt(2^-n * card(S_n))
    bool within_bound = false;  // tv^2 <= 2^-n * card(S_n), exact
};

std::vector<TvProfileRow> tv_profile(const CoefficientMask& mask, unsigned n_max,
                                     unsigned workers = 1, const CascadeLimits& limits = {});

std::string tv_profile_csv(const std::vector<TvProfileRow>& rows);

/// Floating-point cascade for large-n diagnostics. Line measures are stored
/// densely over the key interval, plane measures in a hash map of packed keys.
struct FloatMeasure {
    Dilation dilation;
    unsigned scale = 0;
    std::int64_t line_lo = 0;
    std::vector<double> line;                        // line: weight of key line_lo + i
    std::unordered_map<std::uint64_t, double> plane;  // plane: packed key -> weight

    static std::uint64_t pack(LatticeElem g);
    static LatticeElem unpack(std::uint64_t key);

    template <typename Fn>
    void for_each(Fn fn) const {
        if (dilation.is_line()) {
            for (std::size_t i = 0; i < line.size(); ++i)
                if (line[i] != 0.0) fn(LatticeElem{line_lo + static_cast<std::int64_t>(i), 0}, line[i]);
        } else {
            for (auto& [key, w] : plane) fn(unpack(key), w);
        }
    }
};

FloatMeasure iterate_float(const CoefficientMask& mask, unsigned n, const CascadeLimits& limits = {});

/// Cauchy-gap diagnostics |int f dmu_n - int f dmu_{n+1}| for the built-in
/// family: the constant 1, each coordinate function, and a smooth bump
/// exp(-|x|^2 / max(R,1)^2) centered at the origin of B_R(0). Trend is
/// reported, not asserted.
struct ConvergenceProbe {
    std::vector<std::string> function_names;
    std::vector<unsigned> n_values;          // n = 1 .. n_max - 1
    std::vector<std::vector<double>> gaps;   // gaps[i][j]: function i, n_values[j]
};

ConvergenceProbe convergence_probe(const CoefficientMask& mask, unsigned n_max,
                                   const CascadeLimits& limits = {});

}  // namespace dilation
