#include "freiman/dyadic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <type_traits>

#include "pairwise.hpp"

namespace freiman {

namespace {

Rational as_rational(std::uint64_t v) { return Rational(v); }
const Rational& as_rational(const Rational& v) { return v; }

bool is_positive(std::uint64_t v) { return v > 0; }
bool is_positive(const Rational& v) { return v > 0; }

std::uint64_t weight(std::span<const std::uint64_t> multiplicity, std::size_t i) {
    return multiplicity.empty() ? 1 : multiplicity[i];
}

void check_shape(std::size_t values, std::span<const std::uint64_t> multiplicity) {
    if (values == 0) fail(ErrorCode::empty_set, "dyadic selection over an empty domain");
    if (!multiplicity.empty() && multiplicity.size() != values)
        fail(ErrorCode::invalid_argument, "multiplicity length does not match the value count");
    for (const auto m : multiplicity)
        if (m == 0) fail(ErrorCode::invalid_argument, "multiplicities must be positive");
}

// Exact integer sum kept in 128 bits, spilling into a BigInt on overflow.
class ExactSum {
public:
    void add(std::uint64_t v, std::uint64_t w) {
        const auto x = static_cast<unsigned __int128>(v) * w;
        if (acc_ > ~static_cast<unsigned __int128>(0) - x) {
            spill_ += to_big(acc_);
            acc_ = 0;
        }
        acc_ += x;
    }
    BigInt value() const { return spill_ + to_big(acc_); }

private:
    static BigInt to_big(unsigned __int128 v) {
        BigInt r = static_cast<std::uint64_t>(v >> 64);
        r <<= 64;
        r += static_cast<std::uint64_t>(v);
        return r;
    }
    unsigned __int128 acc_ = 0;
    BigInt spill_;
};

struct Bucket {
    std::uint64_t cardinality = 0;
    Rational mass;
    ExactSum int_mass;
    std::vector<std::size_t> members;
};

void add_mass(Bucket& b, std::uint64_t v, std::uint64_t w) { b.int_mass.add(v, w); }
void add_mass(Bucket& b, const Rational& v, std::uint64_t w) { b.mass += v * w; }

template <class V>
std::map<unsigned, Bucket> bucketize(std::span<const V> values, std::span<const std::uint64_t> multiplicity, const V& max) {
    std::map<unsigned, Bucket> buckets;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!is_positive(values[i])) continue;
        auto& b = buckets[dyadic_index(values[i], max)];
        const auto w = weight(multiplicity, i);
        b.cardinality += w;
        add_mass(b, values[i], w);
        b.members.push_back(i);
    }
    if constexpr (std::is_same_v<V, std::uint64_t>)
        for (auto& [index, b] : buckets) b.mass = Rational(b.int_mass.value());
    return buckets;
}

DyadicLevel make_level(unsigned index, Bucket bucket, const Rational& max) {
    DyadicLevel level;
    level.index = index;
    level.upper = max / pow(Rational(2), index);
    level.lower = level.upper / 2;
    level.members = std::move(bucket.members);
    level.cardinality = bucket.cardinality;
    level.mass = std::move(bucket.mass);
    level.max_value = max;
    return level;
}

template <class V>
DyadicLevel dp1_impl(std::span<const V> values, std::span<const std::uint64_t> multiplicity) {
    check_shape(values.size(), multiplicity);
    for (const auto& v : values)
        if (!is_positive(v)) fail(ErrorCode::invalid_argument, "dp1 requires strictly positive values");
    const V& max = *std::max_element(values.begin(), values.end());
    const V& min = *std::min_element(values.begin(), values.end());
    auto buckets = bucketize(values, multiplicity, max);

    auto best = buckets.begin();
    for (auto it = buckets.begin(); it != buckets.end(); ++it)
        if (it->second.cardinality > best->second.cardinality) best = it;

    std::uint64_t total = 0;
    for (std::size_t i = 0; i < values.size(); ++i) total += weight(multiplicity, i);

    DyadicLevel level = make_level(best->first, std::move(best->second), as_rational(max));
    level.theta = as_rational(min) / as_rational(max);
    level.domain_size = total;
    level.max_index = buckets.rbegin()->first;
    return level;
}

}  // namespace

unsigned dyadic_index(std::uint64_t value, std::uint64_t max) {
    if (value == 0 || value > max) fail(ErrorCode::invalid_argument, "dyadic_index requires 0 < value <= max");
    return static_cast<unsigned>(std::bit_width(max / value) - 1);
}

unsigned dyadic_index(const Rational& value, const Rational& max) {
    if (value <= 0 || value > max) fail(ErrorCode::invalid_argument, "dyadic_index requires 0 < value <= max");
    return floor_log2(max / value);
}

DyadicLevel dp1_level(std::span<const std::uint64_t> values, std::span<const std::uint64_t> multiplicity) {
    return dp1_impl(values, multiplicity);
}

DyadicLevel dp1_level(std::span<const Rational> values, std::span<const std::uint64_t> multiplicity) {
    return dp1_impl(values, multiplicity);
}

DyadicLevel dp2_level(std::span<const std::uint64_t> values, std::span<const std::uint64_t> multiplicity) {
    check_shape(values.size(), multiplicity);
    const std::uint64_t max = *std::max_element(values.begin(), values.end());
    if (max == 0) fail(ErrorCode::invalid_argument, "dp2 requires a map that is not identically zero");

    std::uint64_t total = 0;
    ExactSum exact;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto w = weight(multiplicity, i);
        total += w;
        exact.add(values[i], w);
    }
    const Rational sum(exact.value());
    const Rational theta = sum / (Rational(total) * max);
    const unsigned admissible = floor_log2(Rational(2) / theta);

    auto buckets = bucketize(values, multiplicity, max);
    Rational admissible_mass = 0;
    auto best = buckets.end();
    for (auto it = buckets.begin(); it != buckets.end() && it->first <= admissible; ++it) {
        admissible_mass += it->second.mass;
        if (best == buckets.end() || it->second.mass > best->second.mass) best = it;
    }

    DyadicLevel level = make_level(best->first, std::move(best->second), Rational(max));
    level.theta = theta;
    level.domain_size = total;
    level.max_index = admissible;
    level.admissible_mass = admissible_mass;
    return level;
}

GuaranteeCheck dp1_guarantee(const DyadicLevel& level) {
    const double denom = 1.0 + log2_upper(Rational(1) / level.theta);
    double required = static_cast<double>(level.domain_size) / denom;
    required = std::nextafter(required, -std::numeric_limits<double>::infinity());
    return {static_cast<double>(level.cardinality) >= required, required, level.cardinality};
}

GuaranteeCheck dp2_guarantee(const DyadicLevel& level) {
    const double log_term = log2_upper(Rational(4) / level.theta);
    const double theta = std::nextafter(to_double(level.theta), 0.0);
    double required = std::ldexp(theta, static_cast<int>(level.index) - 1) * static_cast<double>(level.domain_size) / log_term;
    required = std::nextafter(required, -std::numeric_limits<double>::infinity());
    const bool index_ok = level.index <= level.max_index && static_cast<double>(level.index) <= log2_upper(Rational(2) / level.theta);
    return {index_ok && static_cast<double>(level.cardinality) >= required, required, level.cardinality};
}

BigInt cs2_overlap_sum(const FiniteSet& b1, const FiniteSet& b2) {
    require_same_group(b1.group(), b2.group());
    const IndexedSet lookup(b2);
    BigInt total = 0;
    unsigned __int128 acc = 0;
    const auto& g = b2.group();
    if (g.kind() == GroupKind::z) {
        for (const auto x : b2) {
            std::uint64_t c = 0;
            for (const auto b : b1) {
                std::int64_t d = 0;
                if (__builtin_sub_overflow(x.value, b.value, &d)) continue;
                if (lookup.contains(Elem{d})) ++c;
            }
            acc += static_cast<unsigned __int128>(c) * c;
        }
    } else {
        // Pairs arrive x-major, |B1| per x.
        std::uint64_t c = 0;
        std::size_t seen = 0;
        detail::for_each_pair<true>(g, b2.elements(), b1.elements(), [&](std::int64_t d) {
            if (lookup.contains(Elem{d})) ++c;
            if (++seen == b1.size()) {
                acc += static_cast<unsigned __int128>(c) * c;
                c = 0;
                seen = 0;
            }
        });
    }
    total = static_cast<std::uint64_t>(acc >> 64);
    total <<= 64;
    total += static_cast<std::uint64_t>(acc);
    return total;
}

InvarianceBoundReport invariance_energy_bound(const FiniteSet& b1, const FiniteSet& b2, const Rational& rho, bool with_cs2) {
    if (b2.empty()) fail(ErrorCode::empty_set, "invariance bound requires a nonempty B2");
    return invariance_energy_bound(b1, b2, diff_table(b2), rho, with_cs2);
}

InvarianceBoundReport invariance_energy_bound(const FiniteSet& b1, const FiniteSet& b2, const DiffTable& b2_table,
                                              const Rational& rho, bool with_cs2) {
    require_same_group(b1.group(), b2.group());
    if (b1.empty() || b2.empty()) fail(ErrorCode::empty_set, "invariance bound requires nonempty sets");
    if (rho <= 0 || rho > 1) fail(ErrorCode::invalid_argument, "rho must lie in (0, 1], got " + to_string(rho));

    InvarianceBoundReport rep;
    rep.rho = rho;

    const BigInt& rn = boost::multiprecision::numerator(rho);
    const BigInt& rd = boost::multiprecision::denominator(rho);
    const BigInt need = rn * b2.size();
    for (const auto z : b1)
        if (BigInt(b2_table.count(z)) * rd < need) ++rep.hypothesis_violations;
    rep.hypothesis_ok = rep.hypothesis_violations == 0;

    const Rational log_arg = Rational(4) / (rho * rho);
    std::int64_t exponent = 0;
    rep.log_exact = is_power_of_two(log_arg, &exponent);
    const Rational log_term = rep.log_exact ? Rational(exponent) : Rational(log2_upper(log_arg));
    rep.log_term = to_double(log_term);

    rep.b2_energy = energy_from_table(b2_table);
    const BigInt n1 = b1.size();
    const BigInt n2 = b2.size();
    rep.bound = pow(rho, 4) * n1 * n2 * n2 / (16 * log_term * log_term * rep.b2_energy.quadruples);
    rep.actual = energy_exact(b1).normalized();
    rep.bound_holds = rep.actual >= rep.bound;

    if (with_cs2) {
        Cs2Check cs2;
        cs2.lhs = cs2_overlap_sum(b1, b2);
        cs2.required = rho * rho * n1 * n1 * n2;
        cs2.holds = Rational(cs2.lhs) >= cs2.required;
        rep.cs2 = std::move(cs2);
    }
    return rep;
}

}  // namespace freiman
