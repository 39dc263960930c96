#include "dilation/correspond.hpp"

#include "dilation/transfer.hpp"

#include <sstream>

namespace dilation {

std::pair<Rational, Rational> lift_dyadic(const std::string& binary_digits) {
    return address_point(RadixAddress::parse(DilationKind::TwinDragonPlane, binary_digits));
}

LiftedFunction lift_step_function(const LiftedFunction& line_data) {
    LiftedFunction out;
    out.depth = line_data.depth;
    out.cells.reserve(line_data.cells.size());
    for (auto& [addr, value] : line_data.cells) {
        RadixAddress plane_addr{DilationKind::TwinDragonPlane, addr.digits};
        out.cells.emplace_back(plane_addr, value);
    }
    return out;
}

PointValues::PointValues(const CoefficientMask& mask, unsigned depth) : depth_(depth) {
    if (!mask.dilation().is_line())
        throw std::invalid_argument("PointValues: line masks only");
    std::int64_t lo = mask.coeffs().begin()->first.re;
    std::int64_t hi = mask.coeffs().rbegin()->first.re;
    if (lo != 0)
        throw std::invalid_argument("PointValues: mask support must start at 0");

    std::map<std::int64_t, QuadScalar> integers;
    if (hi >= 2) {
        // Interior integer system: phi(i) = sum_j 2 p_{2i-j} phi(j), 1 <= i, j <= K-1.
        std::size_t m = static_cast<std::size_t>(hi - 1);
        QuadMatrix a(m, m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                LatticeElem k{2 * static_cast<std::int64_t>(i + 1) -
                                  static_cast<std::int64_t>(j + 1),
                              0};
                auto it = mask.coeffs().find(k);
                if (it != mask.coeffs().end()) a(i, j) = QuadScalar(2) * it->second;
            }
        }
        auto kernel = one_eigenvectors(a);
        if (kernel.size() != 1)
            throw std::domain_error("PointValues: integer 1-eigenspace is not one-dimensional");
        std::vector<QuadScalar> v = normalize_eigenvector(kernel[0], NormalizeMode::Sum1);
        for (std::size_t i = 0; i < m; ++i) integers.emplace(static_cast<std::int64_t>(i + 1), v[i]);
    } else if (hi == 1) {
        // Two-coefficient support {0, 1}: no interior integers. The uniform
        // mask has the box density; take its right-continuous point values.
        QuadScalar half(1, 2);
        if (!(mask.coeffs().begin()->second == half))
            throw std::domain_error("PointValues: no continuous solution for this mask");
        integers.emplace(0, QuadScalar(1));
    } else {
        throw std::domain_error("PointValues: no continuous solution for this mask");
    }

    levels_.push_back(std::move(integers));
    QuadScalar two(2);
    for (unsigned s = 1; s <= depth_; ++s) {
        std::map<std::int64_t, QuadScalar> level;
        const auto& prev = levels_[s - 1];
        std::int64_t span = hi << s;
        for (std::int64_t g = 0; g <= span; ++g) {
            // phi(g / 2^s) = 2 sum_k p_k phi(g / 2^(s-1) - k)
            QuadScalar sum;
            for (auto& [k, p] : mask.coeffs()) {
                auto it = prev.find(g - (k.re << (s - 1)));
                if (it != prev.end()) sum += p * it->second;
            }
            sum *= two;
            if (!sum.is_zero()) level.emplace(g, sum);
        }
        levels_.push_back(std::move(level));
    }
}

QuadScalar PointValues::at(unsigned scale, std::int64_t g) const {
    const auto& level = levels_.at(scale);
    auto it = level.find(g);
    return it == level.end() ? QuadScalar() : it->second;
}

DiscontinuityProbe discontinuity_probe(const CoefficientMask& mask) {
    PointValues phi(mask, 2);
    DiscontinuityProbe probe;
    probe.limit_along_T01 = phi.at(2, 1);  // phi(1/4)
    probe.limit_along_T10 = phi.at(2, 3);  // phi(3/4)
    if (!probe.limit_along_T01.is_zero()) {
        probe.ratio = probe.limit_along_T10 / probe.limit_along_T01;
        probe.ratio_defined = true;
    }
    probe.discontinuous = !(probe.limit_along_T01 == probe.limit_along_T10);
    return probe;
}

std::string lifted_csv(const LiftedFunction& data) {
    std::ostringstream out;
    out << "address,re,im,value_float\n";
    out.precision(17);
    for (auto& [addr, value] : data.cells) {
        auto [re, im] = address_point(addr);
        out << addr.to_string() << "," << re.to_double() << "," << im.to_double() << "," << value
            << "\n";
    }
    return out.str();
}

LiftedFunction parse_lifted_csv(const std::string& text, DilationKind kind) {
    LiftedFunction data;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::stringstream cells(line);
        std::string address, re, im, value;
        std::getline(cells, address, ',');
        std::getline(cells, re, ',');
        std::getline(cells, im, ',');
        std::getline(cells, value, ',');
        RadixAddress addr = RadixAddress::parse(kind, address);
        data.depth = std::max<unsigned>(data.depth, static_cast<unsigned>(addr.digits.size()));
        data.cells.emplace_back(addr, std::stod(value));
    }
    return data;
}

}  // namespace dilation
