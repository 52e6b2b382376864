#include "freiman/set_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "collector.hpp"
#include "pairwise.hpp"

namespace freiman {

using detail::Collector;
using detail::Window;

namespace detail {

const FpChunkTables* fp_chunk_tables(std::uint64_t p, int n) {
    constexpr std::uint64_t kMaxBase = 256;
    if (p > kMaxBase || n <= 0) return nullptr;
    thread_local std::map<std::pair<std::uint64_t, int>, FpChunkTables> cache;
    auto [it, fresh] = cache.try_emplace({p, n});
    auto& t = it->second;
    if (!fresh) return &t;
    int k = 1;
    std::uint64_t base = p;
    while (k < n && base * p <= kMaxBase) {
        base *= p;
        ++k;
    }
    t.base = base;
    t.chunks = (n + k - 1) / k;
    const arith::Fp ops(p, k);
    t.add.resize(base * base);
    t.sub.resize(base * base);
    for (std::uint64_t x = 0; x < base; ++x)
        for (std::uint64_t y = 0; y < base; ++y) {
            const auto sx = static_cast<std::int64_t>(x), sy = static_cast<std::int64_t>(y);
            t.add[x * base + y] = static_cast<std::uint32_t>(ops.add(sx, sy));
            t.sub[x * base + y] = static_cast<std::uint32_t>(ops.sub(sx, sy));
        }
    std::uint64_t w = 1;
    for (int j = 0; j < t.chunks; ++j) {
        t.weight.push_back(w);
        if (j + 1 < t.chunks) w *= base;
    }
    return &t;
}

}  // namespace detail

namespace {

constexpr std::uint64_t kDenseLookupLimit = std::uint64_t{1} << 25;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::overflow, "integer overflow in set arithmetic");
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_sub_overflow(a, b, &r)) fail(ErrorCode::overflow, "integer overflow in set arithmetic");
    return r;
}

std::optional<Window> sum_window(const FiniteSet& a, const FiniteSet& b) {
    if (a.group().is_finite()) return detail::finite_window(a.group());
    if (a.empty() || b.empty()) return std::nullopt;
    return detail::integer_window(checked_add(a.front().value, b.front().value), checked_add(a.back().value, b.back().value));
}

std::optional<Window> diff_window(const FiniteSet& a, const FiniteSet& b) {
    if (a.group().is_finite()) return detail::finite_window(a.group());
    if (a.empty() || b.empty()) return std::nullopt;
    return detail::integer_window(checked_sub(a.front().value, b.back().value), checked_sub(a.back().value, b.front().value));
}

void require_nonempty(const FiniteSet& a, const char* what) {
    if (a.empty()) fail(ErrorCode::empty_set, std::string(what) + " requires a nonempty set");
}

DiffTable table_from_dense(const FiniteSet& a, Window w, const std::vector<std::uint64_t>& r) {
    std::vector<Elem> support;
    std::vector<std::uint64_t> counts;
    for (std::uint64_t i = 0; i < w.span; ++i) {
        if (r[i]) {
            support.push_back(Elem{static_cast<std::int64_t>(static_cast<std::uint64_t>(w.lo) + i)});
            counts.push_back(r[i]);
        }
    }
    return DiffTable(a.group(), a.size(), std::move(support), std::move(counts));
}

// Ordered groups with a wide window: for fixed x, x - y is monotone in y (two runs
// in Z/m), so each window segment receives a contiguous range of the sorted y.
DiffTable diff_table_segmented(const FiniteSet& a, Window w) {
    constexpr std::uint64_t kSegment = std::uint64_t{1} << 22;
    const auto elems = a.elements();
    const bool modular = a.group().kind() == GroupKind::zmod;
    const __int128 m = modular ? static_cast<__int128>(*a.group().order()) : 0;
    std::vector<std::uint64_t> r(std::min(kSegment, w.span));
    std::vector<Elem> support;
    std::vector<std::uint64_t> counts;

    auto clamp = [](__int128 v) {
        constexpr __int128 lo = std::numeric_limits<std::int64_t>::min(), hi = std::numeric_limits<std::int64_t>::max();
        return static_cast<std::int64_t>(std::max(lo, std::min(hi, v)));
    };
    // y in [ylo, yhi] with x - y + shift in the segment
    auto count_range = [&](std::int64_t x, __int128 ylo, __int128 yhi, __int128 shift, __int128 s0) {
        if (ylo > yhi) return;
        const auto first = std::lower_bound(elems.begin(), elems.end(), Elem{clamp(ylo)});
        const auto last = std::upper_bound(elems.begin(), elems.end(), Elem{clamp(yhi)});
        for (auto it = first; it < last; ++it)
            ++r[static_cast<std::size_t>(static_cast<__int128>(x) - it->value + shift - s0)];
    };

    for (std::uint64_t off = 0; off < w.span; off += kSegment) {
        const auto len = std::min(kSegment, w.span - off);
        const __int128 s0 = static_cast<__int128>(w.lo) + off, s1 = s0 + len - 1;
        std::fill(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(len), 0);
        for (const auto x : elems) {
            if (!modular) {
                count_range(x.value, x.value - s1, x.value - s0, 0, s0);
            } else {
                count_range(x.value, std::max<__int128>(0, x.value - s1), std::min<__int128>(x.value, x.value - s0), 0, s0);
                count_range(x.value, std::max<__int128>(x.value + 1, x.value + m - s1), x.value + m - s0, m, s0);
            }
        }
        for (std::uint64_t i = 0; i < len; ++i)
            if (r[i]) {
                support.push_back(Elem{static_cast<std::int64_t>(s0 + i)});
                counts.push_back(r[i]);
            }
    }
    return DiffTable(a.group(), a.size(), std::move(support), std::move(counts));
}

DiffTable diff_table_pairs(const FiniteSet& a) {
    const auto window = diff_window(a, a);
    const auto elems = a.elements();
    if (window && window->span <= kDenseLookupLimit) {
        std::vector<std::uint64_t> r(window->span, 0);
        const auto lo = static_cast<std::uint64_t>(window->lo);
        detail::for_each_pair<true>(a.group(), elems, elems,
                                    [&](std::int64_t d) { ++r[static_cast<std::uint64_t>(d) - lo]; });
        return table_from_dense(a, *window, r);
    }
    const double pairs = static_cast<double>(elems.size()) * static_cast<double>(elems.size());
    if (window && (a.group().kind() == GroupKind::z || a.group().kind() == GroupKind::zmod) &&
        static_cast<double>(window->span) <= 64 * pairs)
        return diff_table_segmented(a, *window);
    std::unordered_map<std::int64_t, std::uint64_t> r;
    r.reserve(std::min<std::size_t>(elems.size() * elems.size(), std::size_t{1} << 24));
    detail::for_each_pair<true>(a.group(), elems, elems, [&](std::int64_t d) { ++r[d]; });
    std::vector<std::pair<std::int64_t, std::uint64_t>> sorted(r.begin(), r.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<Elem> support;
    std::vector<std::uint64_t> counts;
    support.reserve(sorted.size());
    counts.reserve(sorted.size());
    for (const auto& [t, c] : sorted) {
        support.push_back(Elem{t});
        counts.push_back(c);
    }
    return DiffTable(a.group(), a.size(), std::move(support), std::move(counts));
}

// Integers embed into Z/M without wraparound once M >= 2 * span - 1; M is a power of two.
std::optional<std::uint64_t> integer_embedding_modulus(const FiniteSet& a) {
    if (a.group().kind() != GroupKind::z || a.empty()) return std::nullopt;
    const auto span = static_cast<unsigned __int128>(static_cast<__int128>(a.back().value) - a.front().value) + 1;
    std::uint64_t m = 1;
    while (m < 2 * span - 1) {
        m <<= 1;
        if (m > kDenseTransformLimit) return std::nullopt;
    }
    return std::max<std::uint64_t>(m, 2);
}

bool prefer_transform(const FiniteSet& a) {
    auto order = a.group().order();
    if (!order) order = integer_embedding_modulus(a);
    if (!order || *order > kDenseTransformLimit) return false;
    const double n = static_cast<double>(*order);
    const double pair_cost = static_cast<double>(a.size()) * static_cast<double>(a.size()) *
                             (a.group().kind() == GroupKind::fp ? a.group().dimension() : 1);
    const double transform_cost = 4.0 * n * std::max(1.0, std::log2(n)) * (a.group().kind() == GroupKind::f2 ? 1.0 : 8.0);
    return pair_cost > transform_cost;
}

DiffTable integer_table_by_transform(const FiniteSet& a) {
    const auto m = integer_embedding_modulus(a);
    if (!m) fail(ErrorCode::invalid_argument, "transform path needs an integer span below 2^23");
    const auto g = GroupSpec::zmod(*m);
    std::vector<Elem> shifted;
    shifted.reserve(a.size());
    for (const auto x : a) shifted.push_back(Elem{x.value - a.front().value});
    const auto r = dense_autocorrelation(FiniteSet::from_sorted(g, std::move(shifted)));
    const auto half = static_cast<std::int64_t>(*m / 2);
    std::vector<Elem> support;
    std::vector<std::uint64_t> counts;
    // residues above m/2 are negative differences
    for (std::int64_t d = -half + 1; d < half; ++d) {
        const auto c = (*r)[static_cast<std::uint64_t>(d < 0 ? d + static_cast<std::int64_t>(*m) : d)];
        if (c) {
            support.push_back(Elem{d});
            counts.push_back(c);
        }
    }
    return DiffTable(a.group(), a.size(), std::move(support), std::move(counts));
}

}  // namespace

FiniteSet::FiniteSet(GroupSpec group, std::vector<Elem> elems) : group_(group), elems_(std::move(elems)) {
    for (const auto e : elems_) group_.check(e);
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

FiniteSet FiniteSet::from_sorted(GroupSpec group, std::vector<Elem> sorted) {
    FiniteSet s(group);
    s.elems_ = std::move(sorted);
    return s;
}

bool FiniteSet::contains(Elem e) const noexcept { return std::binary_search(elems_.begin(), elems_.end(), e); }

IndexedSet::IndexedSet(const FiniteSet& set) : set_(&set) {
    if (set.empty()) return;
    std::optional<Window> w = set.group().is_finite() ? detail::finite_window(set.group())
                                                       : detail::integer_window(set.front().value, set.back().value);
    if (w && w->span <= kDenseLookupLimit && w->span <= 64 * std::max<std::size_t>(set.size(), 4096)) {
        lo_ = w->lo;
        dense_.assign(w->span, -1);
        const auto elems = set.elements();
        for (std::size_t i = 0; i < elems.size(); ++i)
            dense_[static_cast<std::uint64_t>(elems[i].value) - static_cast<std::uint64_t>(lo_)] = static_cast<std::int32_t>(i);
    }
}

std::int64_t IndexedSet::index_of(Elem e) const noexcept {
    if (!dense_.empty()) {
        const auto i = static_cast<std::uint64_t>(e.value) - static_cast<std::uint64_t>(lo_);
        return i < dense_.size() ? dense_[i] : -1;
    }
    const auto elems = set_->elements();
    const auto it = std::lower_bound(elems.begin(), elems.end(), e);
    if (it == elems.end() || *it != e) return -1;
    return it - elems.begin();
}

FiniteSet build_set(const GroupSpec& g, std::vector<Elem> elems) {
    if (elems.empty()) fail(ErrorCode::empty_set, "cannot build an empty set");
    return FiniteSet(g, std::move(elems));
}

FiniteSet sum_set(const FiniteSet& a, const FiniteSet& b) {
    require_same_group(a.group(), b.group());
    Collector out(a.group(), sum_window(a, b), a.size() * b.size());
    detail::for_each_pair<false>(a.group(), a.elements(), b.elements(), [&](std::int64_t v) { out.add(v); });
    return out.finish();
}

FiniteSet diff_set(const FiniteSet& a, const FiniteSet& b) {
    require_same_group(a.group(), b.group());
    Collector out(a.group(), diff_window(a, b), a.size() * b.size());
    detail::for_each_pair<true>(a.group(), a.elements(), b.elements(), [&](std::int64_t v) { out.add(v); });
    return out.finish();
}

std::size_t diff_set_size(const FiniteSet& a, const FiniteSet& b) {
    require_same_group(a.group(), b.group());
    Collector out(a.group(), diff_window(a, b), a.size() * b.size());
    detail::for_each_pair<true>(a.group(), a.elements(), b.elements(), [&](std::int64_t v) { out.add(v); });
    return out.count();
}

FiniteSet translate(const FiniteSet& a, Elem c) {
    std::vector<Elem> out;
    out.reserve(a.size());
    for (const auto x : a) out.push_back(a.group().add(x, c));
    return FiniteSet(a.group(), std::move(out));
}

FiniteSet translate_intersect(const FiniteSet& a, Elem t) {
    a.group().check(t);
    std::vector<Elem> out;
    if (a.group().kind() == GroupKind::z) {
        for (const auto x : a) {
            std::int64_t y = 0;
            if (!__builtin_add_overflow(x.value, t.value, &y) && a.contains(Elem{y})) out.push_back(Elem{y});
        }
        return FiniteSet::from_sorted(a.group(), std::move(out));
    }
    arith::dispatch(a.group(), [&](auto ops) {
        for (const auto x : a) {
            const Elem y{ops.add(x.value, t.value)};
            if (a.contains(y)) out.push_back(y);
        }
    });
    return FiniteSet(a.group(), std::move(out));
}

bool is_subset(const FiniteSet& sub, const FiniteSet& super) {
    require_same_group(sub.group(), super.group());
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

bool is_coset(const FiniteSet& a) {
    require_nonempty(a, "is_coset");
    const auto h = translate(a, a.group().neg(a.front()));
    const auto& g = a.group();
    for (const auto x : h)
        for (const auto y : h)
            if (!h.contains(g.sub(x, y))) return false;
    return true;
}

DiffTable::DiffTable(GroupSpec group, std::size_t source_size, std::vector<Elem> support, std::vector<std::uint64_t> counts)
    : group_(group), source_size_(source_size), support_(std::move(support)), counts_(std::move(counts)) {
    if (support_.size() != counts_.size()) fail(ErrorCode::internal_error, "diff table support/count size mismatch");
    if (support_.empty()) return;
    std::optional<Window> w = group_.is_finite() ? detail::finite_window(group_)
                                                 : detail::integer_window(support_.front().value, support_.back().value);
    if (w && w->span <= kDenseLookupLimit && w->span <= 64 * std::max<std::size_t>(support_.size(), 4096) &&
        source_size_ <= std::numeric_limits<std::uint32_t>::max()) {
        lo_ = w->lo;
        dense_.assign(w->span, 0);
        for (std::size_t i = 0; i < support_.size(); ++i)
            dense_[static_cast<std::uint64_t>(support_[i].value) - static_cast<std::uint64_t>(lo_)] = static_cast<std::uint32_t>(counts_[i]);
    }
}

std::uint64_t DiffTable::count(Elem t) const noexcept {
    if (!dense_.empty()) {
        const auto i = static_cast<std::uint64_t>(t.value) - static_cast<std::uint64_t>(lo_);
        return i < dense_.size() ? dense_[i] : 0;
    }
    const auto it = std::lower_bound(support_.begin(), support_.end(), t);
    if (it == support_.end() || *it != t) return 0;
    return counts_[static_cast<std::size_t>(it - support_.begin())];
}

BigInt DiffTable::sum_of_squares() const {
    unsigned __int128 acc = 0;
    for (const auto c : counts_) acc += static_cast<unsigned __int128>(c) * c;
    BigInt out = static_cast<std::uint64_t>(acc >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(acc);
    return out;
}

DiffTable diff_table(const FiniteSet& a, DiffMethod method) {
    require_nonempty(a, "diff_table");
    if (method == DiffMethod::automatic) method = prefer_transform(a) ? DiffMethod::transform : DiffMethod::pairs;
    if (method == DiffMethod::transform) {
        if (a.group().kind() == GroupKind::z) return integer_table_by_transform(a);
        auto r = dense_autocorrelation(a);
        if (!r) fail(ErrorCode::invalid_argument, "transform path needs a finite group of order at most 2^24");
        return table_from_dense(a, *detail::finite_window(a.group()), *r);
    }
    return diff_table_pairs(a);
}

EnergyReport energy_from_table(const DiffTable& table) {
    const BigInt n = table.source_size();
    return EnergyReport{table.sum_of_squares(), n * n * n};
}

EnergyReport energy_exact(const FiniteSet& a, DiffMethod method) { return energy_from_table(diff_table(a, method)); }

EnergyReport energy_oracle(const FiniteSet& a, std::size_t cap) {
    require_nonempty(a, "energy_oracle");
    if (a.size() > cap)
        fail(ErrorCode::cap_exceeded, "oracle cap exceeded: |A| = " + std::to_string(a.size()) + " > " + std::to_string(cap));
    const auto& g = a.group();
    if (g.kind() == GroupKind::z) {
        // a3 - (a1 - a2) stays within [min - width, max + width].
        const auto width = checked_sub(a.back().value, a.front().value);
        checked_sub(a.front().value, width);
        checked_add(a.back().value, width);
    }
    BigInt q = 0;
    std::uint64_t count = 0;
    arith::dispatch(g, [&](auto ops) {
        for (const auto a1 : a)
            for (const auto a2 : a) {
                const auto d = ops.sub(a1.value, a2.value);
                for (const auto a3 : a)
                    if (a.contains(Elem{ops.sub(a3.value, d)})) ++count;
            }
    });
    q = count;
    const BigInt n = a.size();
    return EnergyReport{q, n * n * n};
}

FiniteSet translate_heavy_set(const DiffTable& table, const Rational& rho) {
    if (rho <= 0 || rho > 1) fail(ErrorCode::invalid_argument, "rho must lie in (0, 1], got " + to_string(rho));
    const BigInt& num = boost::multiprecision::numerator(rho);
    const BigInt& den = boost::multiprecision::denominator(rho);
    const BigInt need = num * table.source_size();
    std::vector<Elem> out;
    const auto support = table.support();
    const auto counts = table.counts();
    for (std::size_t i = 0; i < support.size(); ++i)
        if (BigInt(counts[i]) * den >= need) out.push_back(support[i]);
    return FiniteSet::from_sorted(table.group(), std::move(out));
}

FiniteSet translate_heavy_set(const FiniteSet& b2, const Rational& rho) {
    require_nonempty(b2, "translate_heavy_set");
    return translate_heavy_set(diff_table(b2), rho);
}

DoublingStats doubling_stats(const FiniteSet& a) {
    require_nonempty(a, "doubling_stats");
    DoublingStats s;
    s.sum_size = sum_set(a, a).size();
    s.diff_size = diff_set(a, a).size();
    s.k_sum = Rational(s.sum_size, a.size());
    s.k_diff = Rational(s.diff_size, a.size());
    return s;
}

FiniteSet stabilizer(const DiffTable& table) {
    std::vector<Elem> out;
    const auto support = table.support();
    const auto counts = table.counts();
    for (std::size_t i = 0; i < support.size(); ++i)
        if (counts[i] == table.source_size()) out.push_back(support[i]);
    return FiniteSet::from_sorted(table.group(), std::move(out));
}

}  // namespace freiman
