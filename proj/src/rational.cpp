#include "dilation/rational.hpp"

#include <cmath>

namespace dilation {

Rational Rational::from_string(const std::string& text) {
    // INT or INT/POSINT
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(mpz_class(text));
        }
        mpz_class num(text.substr(0, slash));
        mpz_class den(text.substr(slash + 1));
        if (den <= 0) throw std::invalid_argument("Rational: denominator must be positive: " + text);
        return Rational(num, den);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("Rational: malformed literal: " + text);
    }
}

double Rational::to_double() const {
    double v = q_.get_d();
    if (!std::isfinite(v)) throw std::overflow_error("Rational: value exceeds double range");
    return v;
}

Rational pow2_inverse(unsigned n) {
    mpz_class d(1);
    d <<= n;
    return Rational(mpz_class(1), d);
}

}  // namespace dilation
