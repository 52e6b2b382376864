#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "freiman/group.hpp"
#include "freiman/rational.hpp"

namespace freiman {

/// Sorted, duplicate-free collection of elements of one group.
class FiniteSet {
public:
    explicit FiniteSet(GroupSpec group) : group_(group) {}
    /// Validates, sorts and deduplicates.
    FiniteSet(GroupSpec group, std::vector<Elem> elems);

    /// Adopts an already sorted, duplicate-free, validated vector.
    static FiniteSet from_sorted(GroupSpec group, std::vector<Elem> sorted);

    const GroupSpec& group() const noexcept { return group_; }
    std::span<const Elem> elements() const noexcept { return elems_; }
    std::size_t size() const noexcept { return elems_.size(); }
    bool empty() const noexcept { return elems_.empty(); }
    bool contains(Elem e) const noexcept;

    auto begin() const noexcept { return elems_.begin(); }
    auto end() const noexcept { return elems_.end(); }
    Elem front() const { return elems_.front(); }
    Elem back() const { return elems_.back(); }

    friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

private:
    GroupSpec group_;
    std::vector<Elem> elems_;
};

/// Position lookup for the elements of a set. Dense table when the payload span is small.
class IndexedSet {
public:
    explicit IndexedSet(const FiniteSet& set);

    const FiniteSet& set() const noexcept { return *set_; }
    /// Index of e in set().elements(), or -1.
    std::int64_t index_of(Elem e) const noexcept;
    bool contains(Elem e) const noexcept { return index_of(e) >= 0; }

private:
    const FiniteSet* set_;
    std::int64_t lo_ = 0;
    std::vector<std::int32_t> dense_;
};

FiniteSet build_set(const GroupSpec& g, std::vector<Elem> elems);

FiniteSet sum_set(const FiniteSet& a, const FiniteSet& b);
FiniteSet diff_set(const FiniteSet& a, const FiniteSet& b);
/// |A - B| without materializing the set.
std::size_t diff_set_size(const FiniteSet& a, const FiniteSet& b);
FiniteSet translate(const FiniteSet& a, Elem c);
/// A[t] = (A + t) ∩ A.
FiniteSet translate_intersect(const FiniteSet& a, Elem t);
bool is_subset(const FiniteSet& sub, const FiniteSet& super);
/// Translate test: A - a0 is closed under subtraction.
bool is_coset(const FiniteSet& a);

enum class DiffMethod { automatic, pairs, transform };

/// Difference-representation counts r(t) = |{(a, b) in A^2 : a - b = t}| over A - A.
class DiffTable {
public:
    DiffTable(GroupSpec group, std::size_t source_size, std::vector<Elem> support, std::vector<std::uint64_t> counts);

    const GroupSpec& group() const noexcept { return group_; }
    std::size_t source_size() const noexcept { return source_size_; }
    std::span<const Elem> support() const noexcept { return support_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    std::size_t size() const noexcept { return support_.size(); }

    std::uint64_t count(Elem t) const noexcept;
    FiniteSet support_set() const { return FiniteSet::from_sorted(group_, support_); }
    /// Σ r(t)^2, the number of additive quadruples.
    BigInt sum_of_squares() const;

private:
    GroupSpec group_;
    std::size_t source_size_;
    std::vector<Elem> support_;
    std::vector<std::uint64_t> counts_;
    std::int64_t lo_ = 0;
    std::vector<std::uint32_t> dense_;
};

DiffTable diff_table(const FiniteSet& a, DiffMethod method = DiffMethod::automatic);

/// Dense autocorrelation r = 1_A ⋆ 1_{-A} indexed by payload, via a fast transform
/// over the whole group. Empty when the group is infinite or larger than 2^24.
std::optional<std::vector<std::uint64_t>> dense_autocorrelation(const FiniteSet& a);
inline constexpr std::uint64_t kDenseTransformLimit = std::uint64_t{1} << 24;

struct EnergyReport {
    BigInt quadruples;   // Q = Σ_t r(t)^2
    BigInt denominator;  // |A|^3

    Rational normalized() const { return Rational(quadruples, denominator); }
    double value() const { return to_double(normalized()); }
};

EnergyReport energy_exact(const FiniteSet& a, DiffMethod method = DiffMethod::automatic);
EnergyReport energy_from_table(const DiffTable& table);
inline constexpr std::size_t kDefaultOracleCap = 64;
/// Direct enumeration of (a1, a2, a3) with a membership test for a3 - (a1 - a2).
EnergyReport energy_oracle(const FiniteSet& a, std::size_t cap = kDefaultOracleCap);

/// {z in B2 - B2 : |(z + B2) ∩ B2| >= rho |B2|}.
FiniteSet translate_heavy_set(const FiniteSet& b2, const Rational& rho);
FiniteSet translate_heavy_set(const DiffTable& b2_table, const Rational& rho);

struct DoublingStats {
    std::uint64_t sum_size = 0;
    std::uint64_t diff_size = 0;
    Rational k_sum;
    Rational k_diff;
};

DoublingStats doubling_stats(const FiniteSet& a);

/// The stabilizer {t : A + t = A}, a finite subgroup, read off the table as {t : r(t) = |A|}.
FiniteSet stabilizer(const DiffTable& table);

/// Isomorphism G/P -> GroupSpec for a finite subgroup P, with a homomorphic section.
class QuotientMap {
public:
    /// Empty when P is trivial, equals the whole group, or the group has no finite nontrivial subgroups.
    static std::optional<QuotientMap> make(const FiniteSet& subgroup);

    const GroupSpec& ambient() const noexcept { return ambient_; }
    const GroupSpec& quotient() const noexcept { return quotient_; }
    const FiniteSet& kernel() const noexcept { return kernel_; }

    Elem project(Elem x) const;
    Elem lift(Elem y) const;
    FiniteSet project_set(const FiniteSet& s) const;
    /// Full preimage lift(s) + P.
    FiniteSet lift_set(const FiniteSet& s) const;

private:
    QuotientMap(GroupSpec ambient, GroupSpec quotient, FiniteSet kernel)
        : ambient_(ambient), quotient_(quotient), kernel_(std::move(kernel)) {}

    GroupSpec ambient_;
    GroupSpec quotient_;
    FiniteSet kernel_;
    // f2/fp: reduced echelon basis, pivot coordinates, free coordinates.
    std::vector<std::vector<std::uint64_t>> basis_;
    std::vector<int> pivots_;
    std::vector<int> free_;
    std::uint64_t pivot_mask_ = 0;
    std::vector<std::uint64_t> f2_basis_;
    // zmod: generator of P.
    std::uint64_t step_ = 0;
};

}  // namespace freiman
