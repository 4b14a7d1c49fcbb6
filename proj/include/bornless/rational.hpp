#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace bornless {

/// Exact rational used for thresholds, payoffs and every probability table.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "num/den", a plain integer, or a finite decimal such as "0.35" or
/// "1e-3" into an exact rational. Throws std::invalid_argument on anything else
/// (including a zero denominator).
Rational parse_rational(std::string_view text);

/// Serializes as "num/den" with den > 0, always including the slash.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Smallest integer >= q.
BigInt ceil(const Rational& q);

/// Simplest-denominator rational strictly inside (lo, hi), scanning
/// denominators upwards. Requires lo < hi.
Rational rational_between(double lo, const Rational& hi);

/// Fits the value into int64_t or throws std::overflow_error.
std::int64_t to_int64(const BigInt& v);

}  // namespace bornless
