#pragma once

#include "dilation/measure.hpp"

#include <map>

namespace dilation {

/// Read a binary digit string as a radix-(1+i) address: the plane point
/// sum_j gamma_j (1+i)^-j, exact.
std::pair<Rational, Rational> lift_dyadic(const std::string& binary_digits);

/// Values indexed by fixed-depth addresses; on the plane they tile (part of)
/// the twin dragon, on the line the matching dyadic intervals of [0, 1).
struct LiftedFunction {
    unsigned depth = 0;
    std::vector<std::pair<RadixAddress, double>> cells;
};

/// Re-index 1D step data on [0, 1) by reading each depth-n dyadic address as
/// a plane address; values are untouched.
LiftedFunction lift_step_function(const LiftedFunction& line_data);

/// Dyadic point values of the continuous solution phi on the line, from the
/// exact 1-eigenvector of the integer point-value system (entries 2 p_{2i-j}
/// on interior integers, phi = 0 at the support endpoints, integer values
/// summing to 1), cascaded down with phi(x) = 2 sum_k p_k phi(2x - k).
class PointValues {
public:
    PointValues(const CoefficientMask& mask, unsigned depth);

    unsigned depth() const { return depth_; }
    /// phi at the dyadic g / 2^s for 0 <= s <= depth; zero outside [0, K].
    QuadScalar at(unsigned scale, std::int64_t g) const;
    const std::map<std::int64_t, QuadScalar>& level(unsigned scale) const { return levels_.at(scale); }

private:
    unsigned depth_;
    std::vector<std::map<std::int64_t, QuadScalar>> levels_;
};

/// The two tile limits of the lifted function at the corner -i/2: approaching
/// through the quarter tiles T_.01 and T_.10 reproduces the 1D point values
/// phi(1/4) and phi(3/4).
struct DiscontinuityProbe {
    QuadScalar limit_along_T01;  // phi(1/4)
    QuadScalar limit_along_T10;  // phi(3/4)
    QuadScalar ratio;            // limit_T10 / limit_T01, exact (when defined)
    bool ratio_defined = false;
    bool discontinuous = false;
};

DiscontinuityProbe discontinuity_probe(const CoefficientMask& mask);

/// Lifted dataset export: address,re,im,value_float (plane coordinates of the
/// cell root). Round-trips through parse_lifted_csv.
std::string lifted_csv(const LiftedFunction& data);
LiftedFunction parse_lifted_csv(const std::string& text, DilationKind kind);

}  // namespace dilation
