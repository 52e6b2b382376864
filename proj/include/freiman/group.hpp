#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freiman/error.hpp"

namespace freiman {

/// Canonical element payload. F2n: n-bit word. Fpn: base-p digits packed as
/// sum c_i * p^i (c_0 is the first coordinate in text form). Zmod: residue.
/// Zint: the integer itself.
struct Elem {
    std::int64_t value = 0;

    friend constexpr auto operator<=>(const Elem&, const Elem&) = default;
};

enum class GroupKind { f2, fp, zmod, z };

class GroupSpec {
public:
    static GroupSpec f2(int n);
    static GroupSpec fp(std::uint64_t p, int n);
    static GroupSpec zmod(std::uint64_t m);
    static GroupSpec integers();

    /// Parses "f2 n=12", "fp p=3 n=2", "zmod m=7", "z", optionally prefixed by "group".
    static GroupSpec parse(std::string_view text);

    GroupKind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return n_; }
    std::uint64_t prime() const noexcept { return p_; }
    std::uint64_t modulus() const noexcept { return m_; }

    bool is_finite() const noexcept { return kind_ != GroupKind::z; }
    /// Group order; empty for the integers.
    std::optional<std::uint64_t> order() const noexcept;

    /// Canonical text without the "group" keyword, e.g. "fp p=3 n=2".
    std::string to_string() const;

    Elem identity() const noexcept { return Elem{0}; }
    bool valid(Elem a) const noexcept;
    void check(Elem a) const;

    Elem add(Elem a, Elem b) const;
    Elem neg(Elem a) const;
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    Elem parse_elem(std::string_view text) const;
    std::string format(Elem a) const;

    /// Base-p digits for f2/fp, the residue for zmod, the two's-complement pattern for z.
    std::vector<std::uint64_t> coordinates(Elem a) const;
    Elem from_coordinates(std::span<const std::uint64_t> coords) const;

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

private:
    GroupSpec(GroupKind kind, int n, std::uint64_t p, std::uint64_t m) : kind_(kind), n_(n), p_(p), m_(m) {}

    GroupKind kind_ = GroupKind::z;
    int n_ = 0;
    std::uint64_t p_ = 0;
    std::uint64_t m_ = 0;  // group order for f2/fp/zmod
};

bool is_prime(std::uint64_t v) noexcept;

void require_same_group(const GroupSpec& a, const GroupSpec& b);

namespace arith {

// Kind-specialized, unchecked arithmetic for hot loops. Operands must be valid.

struct F2 {
    static std::int64_t add(std::int64_t a, std::int64_t b) noexcept { return a ^ b; }
    static std::int64_t sub(std::int64_t a, std::int64_t b) noexcept { return a ^ b; }
    static std::int64_t neg(std::int64_t a) noexcept { return a; }
};

struct Zmod {
    std::uint64_t m;
    std::int64_t add(std::int64_t a, std::int64_t b) const noexcept {
        const std::uint64_t s = static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b);
        return static_cast<std::int64_t>(s >= m ? s - m : s);
    }
    std::int64_t neg(std::int64_t a) const noexcept { return a == 0 ? 0 : static_cast<std::int64_t>(m - static_cast<std::uint64_t>(a)); }
    std::int64_t sub(std::int64_t a, std::int64_t b) const noexcept { return add(a, neg(b)); }
};

// Digit-wise arithmetic on base-p payloads. Division by p goes through a
// precomputed reciprocal: q = mulhi(x, floor(2^64/p)) is short by at most one.
struct Fp {
    std::uint64_t p;
    int n;
    std::uint64_t inv;
    Fp(std::uint64_t p_, int n_) noexcept : p(p_), n(n_), inv(~std::uint64_t{0} / p_) {}

    std::uint64_t divmod(std::uint64_t& x) const noexcept {
        std::uint64_t q = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * inv) >> 64);
        std::uint64_t r = x - q * p;
        if (r >= p) {
            r -= p;
            ++q;
        }
        x = q;
        return r;
    }
    std::int64_t add(std::int64_t a, std::int64_t b) const noexcept {
        auto x = static_cast<std::uint64_t>(a), y = static_cast<std::uint64_t>(b);
        std::uint64_t r = 0, w = 1;
        for (int i = 0; i < n && (x | y); ++i) {
            std::uint64_t s = divmod(x) + divmod(y);
            if (s >= p) s -= p;
            r += s * w;
            w *= p;
        }
        return static_cast<std::int64_t>(r);
    }
    std::int64_t neg(std::int64_t a) const noexcept {
        auto x = static_cast<std::uint64_t>(a);
        std::uint64_t r = 0, w = 1;
        for (int i = 0; i < n && x; ++i) {
            const std::uint64_t d = divmod(x);
            if (d) r += (p - d) * w;
            w *= p;
        }
        return static_cast<std::int64_t>(r);
    }
    std::int64_t sub(std::int64_t a, std::int64_t b) const noexcept {
        auto x = static_cast<std::uint64_t>(a), y = static_cast<std::uint64_t>(b);
        std::uint64_t r = 0, w = 1;
        for (int i = 0; i < n && (x | y); ++i) {
            const std::uint64_t dx = divmod(x), dy = divmod(y);
            r += (dx >= dy ? dx - dy : dx + p - dy) * w;
            w *= p;
        }
        return static_cast<std::int64_t>(r);
    }
};

// Callers guarantee no overflow (see range checks in the set engine).
struct Z {
    static std::int64_t add(std::int64_t a, std::int64_t b) noexcept { return a + b; }
    static std::int64_t sub(std::int64_t a, std::int64_t b) noexcept { return a - b; }
    static std::int64_t neg(std::int64_t a) noexcept { return -a; }
};

template <class F>
decltype(auto) dispatch(const GroupSpec& g, F&& f) {
    switch (g.kind()) {
        case GroupKind::f2: return f(F2{});
        case GroupKind::fp: return f(Fp{g.prime(), g.dimension()});
        case GroupKind::zmod: return f(Zmod{g.modulus()});
        case GroupKind::z: break;
    }
    return f(Z{});
}

}  // namespace arith

}  // namespace freiman

template <>
struct std::hash<freiman::Elem> {
    std::size_t operator()(const freiman::Elem& e) const noexcept {
        auto x = static_cast<std::uint64_t>(e.value);
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdULL;
        x ^= x >> 33;
        return static_cast<std::size_t>(x);
    }
};
