#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "freiman/rational.hpp"
#include "freiman/set_engine.hpp"

namespace freiman {

/// One dyadic level {s : max/2^(index+1) < f(s) <= max/2^index} of a value map.
/// Inputs may carry multiplicities, in which case each position stands for that
/// many domain points sharing one value.
struct DyadicLevel {
    unsigned index = 0;
    Rational lower;  // exclusive
    Rational upper;  // inclusive
    std::vector<std::size_t> members;
    std::uint64_t cardinality = 0;
    Rational mass;
    Rational theta;
    Rational max_value;
    std::uint64_t domain_size = 0;
    unsigned max_index = 0;  // largest index considered
    Rational admissible_mass;
};

struct GuaranteeCheck {
    bool holds = false;
    double required = 0;  // rounded down
    std::uint64_t achieved = 0;
};

/// Largest-cardinality level of a strictly positive map (ties to the smaller index).
DyadicLevel dp1_level(std::span<const std::uint64_t> values, std::span<const std::uint64_t> multiplicity = {});
DyadicLevel dp1_level(std::span<const Rational> values, std::span<const std::uint64_t> multiplicity = {});

/// Largest-mass level among indices <= floor(log2(2/theta)), theta = mean/max
/// (ties to the smaller index). Zero values belong to no level.
DyadicLevel dp2_level(std::span<const std::uint64_t> values, std::span<const std::uint64_t> multiplicity = {});

/// |members| >= |S| / (1 - log2 theta).
GuaranteeCheck dp1_guarantee(const DyadicLevel& level);
/// index <= log2(2/theta) and |members| >= 2^(index-1) theta / log2(4/theta) |S|.
GuaranteeCheck dp2_guarantee(const DyadicLevel& level);

/// floor(log2(max / value)) for 0 < value <= max.
unsigned dyadic_index(std::uint64_t value, std::uint64_t max);
unsigned dyadic_index(const Rational& value, const Rational& max);

struct Cs2Check {
    BigInt lhs;         // Σ_{b,b' in B1} |(b+B2) ∩ (b'+B2) ∩ B2|
    Rational required;  // rho^2 |B1|^2 |B2|
    bool holds = false;
};

struct InvarianceBoundReport {
    Rational rho;
    double log_term = 0;  // log2(4/rho^2), rounded up unless exact
    bool log_exact = false;
    Rational bound;   // rho^4 |B1| / (16 L^2 |B2| E(B2))
    Rational actual;  // E(B1)
    EnergyReport b2_energy;
    bool hypothesis_ok = false;
    std::size_t hypothesis_violations = 0;
    bool bound_holds = false;
    std::optional<Cs2Check> cs2;
};

/// Σ_{x in B2} |{b in B1 : x - b in B2}|^2, which equals the CS2 double sum.
BigInt cs2_overlap_sum(const FiniteSet& b1, const FiniteSet& b2);

/// Checks B1 ⊆ {z : |(z+B2) ∩ B2| >= rho |B2|} and evaluates the energy lower bound
/// with denominator E(B2). A violated hypothesis is reported, not raised.
InvarianceBoundReport invariance_energy_bound(const FiniteSet& b1, const FiniteSet& b2, const Rational& rho,
                                              bool with_cs2 = true);
InvarianceBoundReport invariance_energy_bound(const FiniteSet& b1, const FiniteSet& b2, const DiffTable& b2_table,
                                              const Rational& rho, bool with_cs2 = true);

}  // namespace freiman
