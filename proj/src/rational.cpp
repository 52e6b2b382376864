#include "freiman/rational.hpp"

#include <cmath>
#include <limits>

#include "freiman/error.hpp"

namespace freiman {

namespace {

// log2 of a positive big integer, accurate to a few ulps.
double log2_big(const BigInt& v) {
    const auto bits = static_cast<long>(boost::multiprecision::msb(v));
    if (bits < 53) return std::log2(v.convert_to<double>());
    const BigInt top = v >> static_cast<unsigned>(bits - 52);
    return static_cast<double>(bits - 52) + std::log2(top.convert_to<double>());
}

double log2_estimate(const Rational& x) {
    if (x <= 0) fail(ErrorCode::invalid_argument, "logarithm of a nonpositive value");
    return log2_big(boost::multiprecision::numerator(x)) - log2_big(boost::multiprecision::denominator(x));
}

constexpr double kLogMargin = 1e-12;

}  // namespace

double to_double(const Rational& q) { return q.convert_to<double>(); }
double to_double(const BigInt& v) { return v.convert_to<double>(); }

std::string to_string(const Rational& q) {
    const BigInt& den = boost::multiprecision::denominator(q);
    if (den == 1) return boost::multiprecision::numerator(q).str();
    return boost::multiprecision::numerator(q).str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
    auto parse_int = [&](std::string_view s) -> BigInt {
        if (s.empty()) fail(ErrorCode::parse_error, "malformed rational: '" + std::string(text) + "'");
        std::size_t i = 0;
        bool negative = false;
        if (s[0] == '-' || s[0] == '+') {
            negative = s[0] == '-';
            i = 1;
        }
        if (i == s.size()) fail(ErrorCode::parse_error, "malformed rational: '" + std::string(text) + "'");
        BigInt v = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') fail(ErrorCode::parse_error, "malformed rational: '" + std::string(text) + "'");
            v = v * 10 + (s[i] - '0');
        }
        return negative ? BigInt(-v) : v;
    };

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const BigInt den = parse_int(text.substr(slash + 1));
        if (den == 0) fail(ErrorCode::parse_error, "zero denominator in '" + std::string(text) + "'");
        return Rational(parse_int(text.substr(0, slash)), den);
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string digits(text.substr(0, dot));
        const std::string_view frac = text.substr(dot + 1);
        if (frac.empty()) fail(ErrorCode::parse_error, "malformed rational: '" + std::string(text) + "'");
        digits += frac;
        if (digits.empty() || digits == "-" || digits == "+") digits += "0";
        return Rational(parse_int(digits), pow(BigInt(10), static_cast<unsigned>(frac.size())));
    }
    return Rational(parse_int(text));
}

bool is_power_of_two(const Rational& x, std::int64_t* exponent) {
    if (x <= 0) return false;
    const BigInt& num = boost::multiprecision::numerator(x);
    const BigInt& den = boost::multiprecision::denominator(x);
    const auto nb = boost::multiprecision::msb(num);
    const auto db = boost::multiprecision::msb(den);
    if (num != (BigInt(1) << nb) || den != (BigInt(1) << db)) return false;
    if (exponent) *exponent = static_cast<std::int64_t>(nb) - static_cast<std::int64_t>(db);
    return true;
}

double log2_upper(const Rational& x) {
    std::int64_t e = 0;
    if (is_power_of_two(x, &e)) return static_cast<double>(e);
    const double v = log2_estimate(x);
    return std::nextafter(v + kLogMargin * (1.0 + std::fabs(v)), std::numeric_limits<double>::infinity());
}

double log2_lower(const Rational& x) {
    std::int64_t e = 0;
    if (is_power_of_two(x, &e)) return static_cast<double>(e);
    const double v = log2_estimate(x);
    return std::nextafter(v - kLogMargin * (1.0 + std::fabs(v)), -std::numeric_limits<double>::infinity());
}

double log_base(const Rational& base, const Rational& x) {
    const double lb = log2_estimate(base);
    if (lb == 0.0) fail(ErrorCode::invalid_argument, "logarithm base must differ from 1");
    return log2_estimate(x) / lb;
}

unsigned floor_log2(const Rational& q) {
    if (q < 1) fail(ErrorCode::invalid_argument, "floor_log2 requires q >= 1");
    const BigInt whole = boost::multiprecision::numerator(q) / boost::multiprecision::denominator(q);
    return static_cast<unsigned>(boost::multiprecision::msb(whole));
}

BigInt pow(const BigInt& base, unsigned exponent) { return boost::multiprecision::pow(base, exponent); }

Rational pow(const Rational& base, unsigned exponent) {
    return Rational(pow(boost::multiprecision::numerator(base), exponent),
                    pow(boost::multiprecision::denominator(base), exponent));
}

bool at_least_power(const Rational& value, const Rational& base, const Rational& exponent) {
    if (value <= 0 || base <= 0) fail(ErrorCode::invalid_argument, "at_least_power requires positive operands");
    // value >= base^(-a/b)  <=>  value^b * base^a >= 1
    const BigInt& a = boost::multiprecision::numerator(exponent);
    const BigInt& b = boost::multiprecision::denominator(exponent);
    if (b > 1'000'000 || boost::multiprecision::abs(a) > 1'000'000)
        fail(ErrorCode::invalid_argument, "exponent denominator too large for exact comparison");
    const auto bu = b.convert_to<unsigned>();
    const auto au = boost::multiprecision::abs(a).convert_to<unsigned>();
    Rational lhs = pow(value, bu);
    const Rational rhs_factor = pow(base, au);
    if (a >= 0) return lhs * rhs_factor >= 1;
    return lhs >= rhs_factor;
}

}  // namespace freiman
