#include "dilation/quad_scalar.hpp"

#include <cctype>
#include <cmath>

namespace dilation {

void validate_field_parameter(int d) {
    if (d < 2) throw std::invalid_argument("field parameter d must be >= 2");
    for (int p = 2; p * p <= d; ++p) {
        if (d % (p * p) == 0) throw std::invalid_argument("field parameter d must be square-free");
    }
}

QuadScalar::QuadScalar(const Rational& a, const Rational& b, int d) : a_(a), b_(b), d_(d) {
    if (!b_.is_zero()) validate_field_parameter(d_);
    normalize();
}

int QuadScalar::merge_fields(const QuadScalar& x, const QuadScalar& y) {
    if (x.d_ == 0) return y.d_;
    if (y.d_ == 0 || x.d_ == y.d_) return x.d_;
    throw FieldMismatch("incompatible field parameters d=" + std::to_string(x.d_) + " and d=" +
                        std::to_string(y.d_));
}

QuadScalar& QuadScalar::operator+=(const QuadScalar& o) {
    d_ = merge_fields(*this, o);
    a_ += o.a_;
    b_ += o.b_;
    normalize();
    return *this;
}

QuadScalar& QuadScalar::operator*=(const QuadScalar& o) {
    int d = merge_fields(*this, o);
    // (a1 + b1 r)(a2 + b2 r) = a1 a2 + d b1 b2 + (a1 b2 + b1 a2) r
    Rational a = a_ * o.a_ + Rational(d) * b_ * o.b_;
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = a;
    b_ = b;
    d_ = d;
    normalize();
    return *this;
}

int QuadScalar::sign() const {
    int sa = a_.sign();
    int sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 against d b^2. Equality is impossible for
    // square-free d with b != 0, since it would make sqrt(d) rational.
    Rational lhs = a_ * a_;
    Rational rhs = Rational(d_) * b_ * b_;
    if (sa > 0) return lhs > rhs ? 1 : -1;
    return lhs > rhs ? -1 : 1;
}

QuadScalar QuadScalar::inverse() const {
    if (is_zero()) throw std::domain_error("QuadScalar: division by zero");
    if (b_.is_zero()) return QuadScalar(Rational(1) / a_);
    // (a + b r)^-1 = (a - b r) / (a^2 - d b^2); the norm is nonzero for d square-free.
    Rational norm = a_ * a_ - Rational(d_) * b_ * b_;
    return QuadScalar(a_ / norm, -b_ / norm, d_);
}

QuadScalar QuadScalar::pow(unsigned e) const {
    QuadScalar acc(1);
    QuadScalar base = *this;
    while (e > 0) {
        if (e & 1u) acc *= base;
        base *= base;
        e >>= 1u;
    }
    return acc;
}

double QuadScalar::to_double() const {
    double v = a_.to_double();
    if (!b_.is_zero()) v += b_.to_double() * std::sqrt(static_cast<double>(d_));
    if (!std::isfinite(v)) throw std::overflow_error("QuadScalar: value exceeds double range");
    return v;
}

std::string QuadScalar::to_string() const {
    if (b_.is_zero()) return a_.to_string();
    std::string out = a_.to_string();
    out += b_.sign() < 0 ? "-" : "+";
    out += b_.abs().to_string();
    out += "*sqrt(" + std::to_string(d_) + ")";
    return out;
}

namespace {

struct Cursor {
    const std::string& s;
    size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("scalar grammar: " + what + " in \"" + s + "\"");
    }

    std::string digits() {
        skip_ws();
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) fail("expected digits");
        return s.substr(start, i - start);
    }

    // INT [/ POSINT]
    Rational rational() {
        skip_ws();
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        mpz_class num(digits());
        mpz_class den(1);
        if (eat('/')) den = mpz_class(digits());
        if (den <= 0) fail("denominator must be positive");
        if (neg) num = -num;
        return Rational(num, den);
    }
};

}  // namespace

QuadScalar QuadScalar::parse(const std::string& text) {
    Cursor c{text};
    Rational a = c.rational();
    if (c.done()) return QuadScalar(a);

    int sign = 0;
    if (c.eat('+'))
        sign = 1;
    else if (c.eat('-'))
        sign = -1;
    else
        c.fail("expected '+' or '-' before radical term");

    Rational b = c.rational();
    if (!c.eat('*')) c.fail("expected '*'");
    c.skip_ws();
    if (c.s.compare(c.i, 4, "sqrt") != 0) c.fail("expected 'sqrt'");
    c.i += 4;
    if (!c.eat('(')) c.fail("expected '('");
    int d = std::stoi(c.digits());
    if (!c.eat(')')) c.fail("expected ')'");
    if (!c.done()) c.fail("trailing characters");
    if (sign < 0) b = -b;
    return QuadScalar(a, b, d);
}

}  // namespace dilation
