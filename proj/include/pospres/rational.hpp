#pragma once

// Exact scalar types. All algebraic code paths run on arbitrary-precision
// rationals; doubles enter only through the eigenvalue / matrix-exponential
// kernels and are converted back losslessly where exactness matters.

#include <boost/multiprecision/gmp.hpp>

#include <string>

#include "pospres/errors.hpp"

namespace pospres {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Parses an exact rational literal: "p", "-p", or "p/q". Decimal points are
// rejected on purpose; file formats carry exact values only.
inline Rational parse_rational(const std::string& text) {
    if (text.find('.') != std::string::npos)
        throw ParseError("rational literal must be decimal-free: '" + text + "'");
    try {
        Rational r(text);
        return r;
    } catch (const std::exception&) {
        throw ParseError("malformed rational literal: '" + text + "'");
    }
}

inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Every finite double is a dyadic rational; this conversion is lossless.
inline Rational rational_from_double(double x) { return Rational(x); }

// Coefficient-ring glue shared by the templated polynomial/operator code.
template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<Rational> {
    static constexpr bool exact = true;
    static Rational from_integer(const Integer& z) { return Rational(z); }
    static Rational from_rational(const Rational& q) { return q; }
    static double to_double(const Rational& q) { return q.convert_to<double>(); }
};

template <>
struct CoeffTraits<double> {
    static constexpr bool exact = false;
    static double from_integer(const Integer& z) { return z.convert_to<double>(); }
    static double from_rational(const Rational& q) { return q.convert_to<double>(); }
    static double to_double(double x) { return x; }
};

}  // namespace pospres
