#include "dilation/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace dilation {

namespace {

void require_line_elem(DilationKind kind, LatticeElem g) {
    if (kind == DilationKind::DyadicLine && g.im != 0)
        throw std::invalid_argument("line lattice element has nonzero imaginary part");
}

}  // namespace

LatticeElem mul_M(DilationKind kind, LatticeElem g) {
    require_line_elem(kind, g);
    if (kind == DilationKind::DyadicLine) return {2 * g.re, 0};
    // (1+i)(re + im i) = (re - im) + (re + im) i
    return {g.re - g.im, g.re + g.im};
}

std::optional<LatticeElem> div_M(DilationKind kind, LatticeElem g) {
    require_line_elem(kind, g);
    if (kind == DilationKind::DyadicLine) {
        if (g.re % 2 != 0) return std::nullopt;
        return LatticeElem{g.re / 2, 0};
    }
    // g / (1+i) = g (1-i) / 2 = ((re+im) + (im-re) i) / 2, integral iff re+im even.
    std::int64_t s = g.re + g.im;
    std::int64_t t = g.im - g.re;
    if (s % 2 != 0) return std::nullopt;
    return LatticeElem{s / 2, t / 2};
}

Parity parity(DilationKind kind, LatticeElem g) {
    require_line_elem(kind, g);
    std::int64_t probe = kind == DilationKind::DyadicLine ? g.re : g.re + g.im;
    return probe % 2 == 0 ? Parity::Even : Parity::Odd;
}

std::string lattice_to_string(DilationKind kind, LatticeElem g) {
    require_line_elem(kind, g);
    if (kind == DilationKind::DyadicLine) return std::to_string(g.re);
    if (g.im == 0) return std::to_string(g.re);
    std::string imag;
    if (g.im == 1)
        imag = "i";
    else if (g.im == -1)
        imag = "-i";
    else
        imag = std::to_string(g.im) + "i";
    if (g.re == 0) return imag;
    return std::to_string(g.re) + (g.im > 0 ? "+" : "") + imag;
}

LatticeElem lattice_parse(DilationKind kind, const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty lattice element");

    if (kind == DilationKind::DyadicLine) {
        size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument("malformed line element: " + text);
        return {v, 0};
    }

    // Split into one or two signed terms; each term is "<int>" or "<int?>i".
    std::vector<std::string> terms;
    size_t start = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && i > 0) {
            terms.push_back(s.substr(start, i - start));
            start = i;
        }
    }
    terms.push_back(s.substr(start));
    if (terms.size() > 2) throw std::invalid_argument("malformed plane element: " + text);

    LatticeElem out{0, 0};
    bool saw_re = false, saw_im = false;
    for (std::string term : terms) {
        bool imag = !term.empty() && term.back() == 'i';
        if (imag) term.pop_back();
        long long v;
        if (term.empty() || term == "+")
            v = 1;
        else if (term == "-")
            v = -1;
        else {
            size_t used = 0;
            v = std::stoll(term, &used);
            if (used != term.size()) throw std::invalid_argument("malformed plane element: " + text);
        }
        if (imag) {
            if (saw_im) throw std::invalid_argument("duplicate imaginary term: " + text);
            out.im = v;
            saw_im = true;
        } else {
            if (saw_re) throw std::invalid_argument("duplicate real term: " + text);
            out.re = v;
            saw_re = true;
        }
    }
    return out;
}

std::string RadixAddress::to_string() const {
    std::string s;
    s.reserve(digits.size());
    for (auto d : digits) s += static_cast<char>('0' + d);
    return s;
}

RadixAddress RadixAddress::parse(DilationKind kind, const std::string& text) {
    RadixAddress addr{kind, {}};
    addr.digits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') throw std::invalid_argument("radix address digits must be 0 or 1");
        addr.digits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return addr;
}

std::pair<Rational, Rational> address_point(const RadixAddress& addr) {
    // Accumulate sum_j gamma_j * M^-j with M^-j maintained as an exact
    // rational pair; on the plane M^-1 = (1-i)/2.
    Rational px(0), py(0);
    Rational wx(1), wy(0);
    Rational half(1, 2);
    for (auto digit : addr.digits) {
        if (addr.kind == DilationKind::DyadicLine) {
            wx *= half;
        } else {
            Rational nx = (wx + wy) * half;
            Rational ny = (wy - wx) * half;
            wx = nx;
            wy = ny;
        }
        if (digit) {
            px += wx;
            py += wy;
        }
    }
    return {px, py};
}

LatticeElem address_key(const RadixAddress& addr) {
    LatticeElem acc{0, 0};
    for (auto digit : addr.digits) {
        acc = mul_M(addr.kind, acc);
        if (digit) acc = acc + LatticeElem{1, 0};
    }
    return acc;
}

GreedySplit greedy_split(DilationKind kind, LatticeElem g, unsigned n) {
    // Digits come out least-significant first (gamma_n, ..., gamma_1); the
    // returned address stores them in gamma_1-first order.
    std::vector<std::uint8_t> rev;
    rev.reserve(n);
    for (unsigned j = 0; j < n; ++j) {
        std::uint8_t digit = parity(kind, g) == Parity::Odd ? 1 : 0;
        rev.push_back(digit);
        LatticeElem shifted = digit ? g - LatticeElem{1, 0} : g;
        g = *div_M(kind, shifted);
    }
    std::reverse(rev.begin(), rev.end());
    return GreedySplit{RadixAddress{kind, std::move(rev)}, g};
}

std::optional<RadixAddress> greedy_digits(DilationKind kind, LatticeElem g, unsigned n) {
    GreedySplit split = greedy_split(kind, g, n);
    if (!(split.residue == LatticeElem{0, 0})) return std::nullopt;
    return split.address;
}

}  // namespace dilation
