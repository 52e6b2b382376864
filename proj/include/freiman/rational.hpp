#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace freiman {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

double to_double(const Rational& q);
double to_double(const BigInt& v);

/// "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& q);

/// Accepts "p/q", an integer, or a finite decimal such as "0.25"; the result is exact.
Rational parse_rational(std::string_view text);

/// Bounds on log2(x) for x > 0. Exact when x is a power of two; otherwise the
/// double estimate is pushed outward by a relative margin far above rounding error.
double log2_upper(const Rational& x);
double log2_lower(const Rational& x);
bool is_power_of_two(const Rational& x, std::int64_t* exponent = nullptr);

/// log base `base` of x as a double; both arguments must be positive and base != 1.
double log_base(const Rational& base, const Rational& x);

/// floor(log2(q)) for q >= 1.
unsigned floor_log2(const Rational& q);

BigInt pow(const BigInt& base, unsigned exponent);
Rational pow(const Rational& base, unsigned exponent);

/// Exact test of value >= base^(-exponent) for positive rationals with a rational exponent.
bool at_least_power(const Rational& value, const Rational& base, const Rational& exponent);

}  // namespace freiman
