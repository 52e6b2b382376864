#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "freiman/set_engine.hpp"

namespace freiman::detail {

/// Lookup tables for digit-wise arithmetic in F_p^n with p small. A payload is
/// split into chunks of k base-p digits; chunk sums and differences come from
/// tables of size B^2 with B = p^k, so the inner loop does no division.
struct FpChunkTables {
    std::uint64_t base = 0;
    int chunks = 0;
    std::vector<std::uint32_t> add;
    std::vector<std::uint32_t> sub;
    std::vector<std::uint64_t> weight;
};

/// Cached per (p, n); null when p is too large for a useful table.
const FpChunkTables* fp_chunk_tables(std::uint64_t p, int n);

inline constexpr std::size_t kChunkedMinWork = 1 << 14;

/// Calls f(x op y) for every x in a, y in b, where op is + or -.
template <bool Subtract, class F>
void for_each_pair(const GroupSpec& g, std::span<const Elem> a, std::span<const Elem> b, F&& f) {
    if (g.kind() == GroupKind::fp && a.size() * b.size() >= kChunkedMinWork) {
        if (const auto* t = fp_chunk_tables(g.prime(), g.dimension())) {
            const auto c = static_cast<std::size_t>(t->chunks);
            auto split = [&](std::span<const Elem> s) {
                std::vector<std::uint32_t> out(s.size() * c);
                for (std::size_t i = 0; i < s.size(); ++i) {
                    auto v = static_cast<std::uint64_t>(s[i].value);
                    for (std::size_t j = 0; j < c; ++j) {
                        out[i * c + j] = static_cast<std::uint32_t>(v % t->base);
                        v /= t->base;
                    }
                }
                return out;
            };
            const auto ca = split(a), cb = split(b);
            const auto& tab = Subtract ? t->sub : t->add;
            const auto base = t->base;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const std::uint32_t* x = &ca[i * c];
                for (std::size_t k = 0; k < b.size(); ++k) {
                    const std::uint32_t* y = &cb[k * c];
                    std::uint64_t v = 0;
                    for (std::size_t j = 0; j < c; ++j) v += t->weight[j] * tab[x[j] * base + y[j]];
                    f(static_cast<std::int64_t>(v));
                }
            }
            return;
        }
    }
    arith::dispatch(g, [&](auto ops) {
        for (const auto x : a)
            for (const auto y : b) f(Subtract ? ops.sub(x.value, y.value) : ops.add(x.value, y.value));
    });
}

}  // namespace freiman::detail
