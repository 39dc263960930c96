#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dilation {

/// Exact rational number. Canonical form is maintained at all times:
/// positive denominator, gcd(|num|, den) = 1, zero stored as 0/1.
class Rational {
public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}
    Rational(long n, long d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        q_ = mpq_class(n, d);
        q_.canonicalize();
    }
    explicit Rational(const mpz_class& n) : q_(n) {}
    Rational(const mpz_class& n, const mpz_class& d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        q_ = mpq_class(n, d);
        q_.canonicalize();
    }

    static Rational from_string(const std::string& text);

    const mpz_class& num() const { return q_.get_num(); }
    const mpz_class& den() const { return q_.get_den(); }

    bool is_zero() const { return q_ == 0; }
    int sign() const { return sgn(q_); }
    Rational abs() const { return Rational(::abs(q_)); }

    /// Nearest double. Throws if the value is outside double range.
    double to_double() const;

    /// Canonical text form, always "num/den".
    std::string to_string() const { return q_.get_num().get_str() + "/" + q_.get_den().get_str(); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational x, const Rational& y) { return x += y; }
    friend Rational operator-(Rational x, const Rational& y) { return x -= y; }
    friend Rational operator*(Rational x, const Rational& y) { return x *= y; }
    friend Rational operator/(Rational x, const Rational& y) { return x /= y; }

    friend bool operator==(const Rational& x, const Rational& y) { return x.q_ == y.q_; }
    friend bool operator!=(const Rational& x, const Rational& y) { return x.q_ != y.q_; }
    friend bool operator<(const Rational& x, const Rational& y) { return x.q_ < y.q_; }
    friend bool operator<=(const Rational& x, const Rational& y) { return x.q_ <= y.q_; }
    friend bool operator>(const Rational& x, const Rational& y) { return x.q_ > y.q_; }
    friend bool operator>=(const Rational& x, const Rational& y) { return x.q_ >= y.q_; }

private:
    explicit Rational(const mpq_class& q) : q_(q) {}
    mpq_class q_;
};

/// 2^-n as an exact rational.
Rational pow2_inverse(unsigned n);

}  // namespace dilation
