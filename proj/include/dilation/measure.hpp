#pragma once

#include "dilation/lattice.hpp"

#include <iosfwd>
#include <map>
#include <vector>

namespace dilation {

using WeightMap = std::map<LatticeElem, QuadScalar, LatticeLess>;

/// Finite coefficient mask {p_k}: the driver of the dilation equation.
/// Invariants: nonempty support, sum of coefficients exactly 1, zero
/// coefficients dropped, all keys on the declared lattice.
class CoefficientMask {
public:
    CoefficientMask(Dilation dilation, int field_d, WeightMap coeffs);

    const Dilation& dilation() const { return dilation_; }
    DilationKind kind() const { return dilation_.kind; }
    /// Field parameter for all scalars of this computation context.
    int field_d() const { return field_d_; }
    const WeightMap& coeffs() const { return coeffs_; }

    /// Largest |k|^2 over the support.
    std::int64_t max_norm_sq() const;
    /// Largest |k - k'|^2 over support pairs (squared diameter).
    std::int64_t diameter_sq() const;

    /// JSON round trip, schema:
    /// {"dilation":"line"|"plane","field_d":3,"coeffs":[{"k":"0","p":"1/8+1/8*sqrt(3)"},...]}
    static CoefficientMask from_json(const std::string& json_text);
    std::string to_json() const;
    static CoefficientMask load(const std::string& path);

private:
    Dilation dilation_;
    int field_d_;
    WeightMap coeffs_;
};

/// Discrete signed measure at scale n: weight w(g) sits at the point M^-n g.
/// Only nonzero weights are stored. The scale is explicit bookkeeping and is
/// never canonicalized away, even when every key is divisible by M.
struct DiscreteMeasure {
    Dilation dilation;
    unsigned scale = 0;
    WeightMap weights;

    QuadScalar weight_at(LatticeElem g) const {
        auto it = weights.find(g);
        return it == weights.end() ? QuadScalar() : it->second;
    }
    std::size_t support_size() const { return weights.size(); }

    void insert_add(LatticeElem g, const QuadScalar& w);
    /// Remove weights that cancelled to exact zero.
    void prune_zeros();
};

/// mu_1: the scale-1 measure with weight p_k at key k; total mass 1.
DiscreteMeasure mask_mu1(const CoefficientMask& mask);

/// Push-forward under x -> M^-1 x: same keys, scale + 1.
DiscreteMeasure pushforward_D(const DiscreteMeasure& mu);

/// Exact convolution. Operands are brought to the common scale
/// max(n_mu, n_nu) by rescaling keys g -> M^delta g, then weights combine as
/// w(z) = sum_{x+y=z} mu(x) nu(y). Worker count only affects scheduling; the
/// result is bit-identical for any value.
DiscreteMeasure convolve(const DiscreteMeasure& mu, const DiscreteMeasure& nu, unsigned workers = 1);

QuadScalar total_mass(const DiscreteMeasure& mu);
QuadScalar tv_norm(const DiscreteMeasure& mu);

/// Exact report on the probability conditions: p_k >= 0 everywhere and the
/// even/odd coset sums both equal 1/2.
struct ProbabilityReport {
    bool all_nonneg = false;
    QuadScalar even_sum;
    QuadScalar odd_sum;
    bool absolutely_continuous_criterion = false;
};

ProbabilityReport check_probability(const CoefficientMask& mask);

/// Exact report on the orthonormality (conjugate quadrature filter)
/// conditions sum_k p_k p_{k+Mi} = 1/2 delta_{0i}.
struct OrthonormalityReport {
    struct ShiftSum {
        LatticeElem shift;
        QuadScalar sum;
    };
    std::vector<ShiftSum> sums;  // every shift with |M i|^2 <= diameter^2
    bool pass = false;
};

OrthonormalityReport check_orthonormality(const CoefficientMask& mask);

/// Measure dump: one "key,scalar" line per weight, deterministic key order.
std::string measure_to_text(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_text(Dilation dilation, unsigned scale, const std::string& text);

}  // namespace dilation
