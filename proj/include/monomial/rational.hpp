#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "monomial/errors.hpp"

namespace monomial {

/// Exact scalar: arbitrary precision, kept in lowest terms with a positive denominator.
/// Expression templates are off so `auto` never captures a dangling expression.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

/// num/den for any nonzero den (the two-argument Rational constructor rejects negative denominators).
inline Rational make_rational(Integer num, Integer den) {
    if (den == 0) throw InvalidArgument("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(num, den);
}

inline Rational rat(std::int64_t num, std::int64_t den = 1) { return make_rational(num, den); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline Integer floor_of(const Rational& r) {
    Integer q = numerator(r) / denominator(r);
    if (numerator(r) < 0 && q * denominator(r) != numerator(r)) --q;
    return q;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "p/q" with the denominator omitted when it is 1.
inline std::string to_string(const Rational& r) { return r.str(); }

/// Parses "p", "-p" or "p/q".
inline Rational parse_rational(const std::string& text) {
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos) return Rational(Integer(text));
        Integer den(text.substr(slash + 1));
        if (den == 0) throw InvalidArgument("zero denominator in '" + text + "'");
        return make_rational(Integer(text.substr(0, slash)), den);
    } catch (const InvalidArgument&) {
        throw;
    } catch (const std::exception&) {
        throw InvalidArgument("not a rational literal: '" + text + "'");
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
inline bool exact_sqrt(const Rational& r, Rational& out) {
    if (r < 0) return false;
    Integer n = numerator(r), d = denominator(r);
    Integer sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
    if (sn * sn != n || sd * sd != d) return false;
    out = Rational(sn, sd);
    return true;
}

inline Rational pow(const Rational& base, unsigned exponent) {
    Rational result = 1, b = base;
    while (exponent) {
        if (exponent & 1u) result *= b;
        b *= b;
        exponent >>= 1u;
    }
    return result;
}

inline Rational factorial(unsigned n) {
    Integer f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return Rational(f);
}

/// Rising factorial (a)_k.
inline Rational pochhammer(const Rational& a, unsigned k) {
    Rational r = 1;
    for (unsigned i = 0; i < k; ++i) r *= a + i;
    return r;
}

/// Generalized binomial coefficient C(a, k) for rational a.
inline Rational binomial(const Rational& a, unsigned k) {
    Rational r = 1;
    for (unsigned i = 0; i < k; ++i) r *= a - i;
    return r / factorial(k);
}

} // namespace monomial
