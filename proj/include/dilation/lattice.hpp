#pragma once

#include "dilation/quad_scalar.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dilation {

/// Which dilation drives the computation: multiplication by 2 on the integer
/// line, or by 1+i on the Gaussian integers (twin-dragon plane). Both have
/// |det M| = 2; the Euclidean modulus |M| is 2 resp. sqrt(2).
enum class DilationKind { DyadicLine, TwinDragonPlane };

struct Dilation {
    DilationKind kind = DilationKind::DyadicLine;

    bool is_line() const { return kind == DilationKind::DyadicLine; }
    bool is_plane() const { return kind == DilationKind::TwinDragonPlane; }
    int det_abs() const { return 2; }
    /// |M|^2, exact: 4 on the line, 2 on the plane.
    int norm_m_sq() const { return is_line() ? 4 : 2; }
    double norm_m() const { return is_line() ? 2.0 : 1.4142135623730951; }
};

/// Element of the lattice Gamma: an integer on the line (im == 0), a Gaussian
/// integer re + im*i on the plane.
struct LatticeElem {
    std::int64_t re = 0;
    std::int64_t im = 0;

    friend bool operator==(const LatticeElem&, const LatticeElem&) = default;
    friend LatticeElem operator+(LatticeElem a, LatticeElem b) { return {a.re + b.re, a.im + b.im}; }
    friend LatticeElem operator-(LatticeElem a, LatticeElem b) { return {a.re - b.re, a.im - b.im}; }
    LatticeElem operator-() const { return {-re, -im}; }

    /// |g|^2 = re^2 + im^2.
    std::int64_t norm_sq() const { return re * re + im * im; }
};

/// Deterministic ordering for maps and sets (re-major, then im).
struct LatticeLess {
    bool operator()(const LatticeElem& a, const LatticeElem& b) const {
        return a.re != b.re ? a.re < b.re : a.im < b.im;
    }
};

LatticeElem mul_M(DilationKind kind, LatticeElem g);
std::optional<LatticeElem> div_M(DilationKind kind, LatticeElem g);

enum class Parity { Even, Odd };
Parity parity(DilationKind kind, LatticeElem g);

/// Text form: line "3"; plane "1-2i", "-i", "0".
std::string lattice_to_string(DilationKind kind, LatticeElem g);
LatticeElem lattice_parse(DilationKind kind, const std::string& text);

/// Finite radix-{0,1} digit string (gamma_1, ..., gamma_n), gamma_1 first,
/// addressing the point sum_j M^-j gamma_j and the scale-n sub-tile it roots.
struct RadixAddress {
    DilationKind kind = DilationKind::DyadicLine;
    std::vector<std::uint8_t> digits;

    std::string to_string() const;
    static RadixAddress parse(DilationKind kind, const std::string& text);

    friend bool operator==(const RadixAddress&, const RadixAddress&) = default;
};

/// Exact coordinates of sum_j M^-j gamma_j; the second component is 0 on the line.
std::pair<Rational, Rational> address_point(const RadixAddress& addr);

/// The scale-n lattice key sum_j M^(n-j) gamma_j of the sub-tile the address names.
LatticeElem address_key(const RadixAddress& addr);

/// Result of running n greedy digit-extraction steps from g: digits are in
/// address order (gamma_1 first) and g = address_key(digits) + M^n * residue.
struct GreedySplit {
    RadixAddress address;
    LatticeElem residue;
};

GreedySplit greedy_split(DilationKind kind, LatticeElem g, unsigned n);

/// Canonical depth-n digit string for g, if M^-n g lies in the canonical
/// representative set of the tile; nullopt when the final residue is nonzero.
std::optional<RadixAddress> greedy_digits(DilationKind kind, LatticeElem g, unsigned n);

/// Tile values at one scale: key g maps to mu(M^-n (g + T)).
struct TileValueMap {
    Dilation dilation;
    unsigned scale = 0;
    std::map<LatticeElem, QuadScalar, LatticeLess> values;
};

}  // namespace dilation
