#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace asl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

// Parses "123", "-4" or "0.5" into an exact rational (0.5 -> 1/2).
Rational rational_from_literal(const std::string& text);

// "3" for integers, otherwise "num/den" in lowest terms.
std::string rational_to_string(const Rational& r);

// Exact decimal rendering when the denominator is of the form 2^a*5^b,
// otherwise falls back to num/den.
std::string rational_literal(const Rational& r);

// Fixed-point rendering rounded half away from zero, e.g. (3/5, 2) -> "0.60".
std::string render_decimal(const Rational& r, int places);

double rational_to_double(const Rational& r);

}  // namespace asl
