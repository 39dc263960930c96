#pragma once

#include "dilation/rational.hpp"

#include <string>

namespace dilation {

/// Thrown when two scalars from distinct quadratic fields meet in one operation.
struct FieldMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Exact element a + b*sqrt(d) of the real quadratic field Q(sqrt(d)).
///
/// d is a small square-free integer >= 2. Pure rationals carry d = 0 and are
/// compatible with every field; two scalars with nonzero radical parts must
/// agree on d. The representation is unique: b == 0 forces d == 0.
class QuadScalar {
public:
    QuadScalar() : a_(0), b_(0), d_(0) {}
    QuadScalar(const Rational& a) : a_(a), b_(0), d_(0) {}
    QuadScalar(long n) : a_(n), b_(0), d_(0) {}
    QuadScalar(long n, long d) : a_(n, d), b_(0), d_(0) {}
    QuadScalar(const Rational& a, const Rational& b, int d);

    /// b * sqrt(d)
    static QuadScalar radical(const Rational& b, int d) { return QuadScalar(Rational(0), b, d); }

    const Rational& rational_part() const { return a_; }
    const Rational& radical_part() const { return b_; }
    /// Field parameter; 0 for pure rationals.
    int field() const { return d_; }

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_rational() const { return b_.is_zero(); }

    /// Exact sign in {-1, 0, +1}, decided by integer arithmetic only.
    int sign() const;
    QuadScalar abs() const { return sign() >= 0 ? *this : -*this; }

    QuadScalar inverse() const;
    QuadScalar pow(unsigned e) const;

    /// Nearest double; approximation layer only, never fed back into exact paths.
    double to_double() const;

    /// Canonical text in the scalar grammar, e.g. "1/8+1/8*sqrt(3)" or "-3/4".
    std::string to_string() const;
    static QuadScalar parse(const std::string& text);

    QuadScalar operator-() const { return QuadScalar(-a_, -b_, d_); }
    QuadScalar& operator+=(const QuadScalar& o);
    QuadScalar& operator-=(const QuadScalar& o) { return *this += -o; }
    QuadScalar& operator*=(const QuadScalar& o);
    QuadScalar& operator/=(const QuadScalar& o) { return *this *= o.inverse(); }

    friend QuadScalar operator+(QuadScalar x, const QuadScalar& y) { return x += y; }
    friend QuadScalar operator-(QuadScalar x, const QuadScalar& y) { return x -= y; }
    friend QuadScalar operator*(QuadScalar x, const QuadScalar& y) { return x *= y; }
    friend QuadScalar operator/(QuadScalar x, const QuadScalar& y) { return x /= y; }

    friend bool operator==(const QuadScalar& x, const QuadScalar& y) {
        return x.d_ == y.d_ && x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const QuadScalar& x, const QuadScalar& y) { return !(x == y); }

private:
    void normalize() {
        if (b_.is_zero()) d_ = 0;
    }
    // Common field of two operands, rejecting genuine mismatches.
    static int merge_fields(const QuadScalar& x, const QuadScalar& y);

    Rational a_, b_;
    int d_;
};

/// sqrt(d) must not be an integer; rejects d < 2, squares and non-square-free d.
void validate_field_parameter(int d);

}  // namespace dilation
