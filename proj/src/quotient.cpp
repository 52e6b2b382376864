#include "freiman/set_engine.hpp"

namespace freiman {

namespace {

std::uint64_t modinv(std::uint64_t a, std::uint64_t p) {
    std::uint64_t r = 1, e = p - 2;
    a %= p;
    while (e) {
        if (e & 1) r = static_cast<std::uint64_t>(static_cast<unsigned __int128>(r) * a % p);
        a = static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * a % p);
        e >>= 1;
    }
    return r;
}

}  // namespace

std::optional<QuotientMap> QuotientMap::make(const FiniteSet& subgroup) {
    const GroupSpec& g = subgroup.group();
    if (subgroup.size() <= 1 || !subgroup.contains(g.identity())) return std::nullopt;
    if (g.order() && *g.order() == subgroup.size()) return std::nullopt;

    switch (g.kind()) {
        case GroupKind::z: return std::nullopt;
        case GroupKind::zmod: {
            const auto step = static_cast<std::uint64_t>(subgroup.elements()[1].value);
            if (g.modulus() % step != 0 || g.modulus() / step != subgroup.size())
                fail(ErrorCode::invalid_argument, "set is not a subgroup of " + g.to_string());
            QuotientMap q(g, GroupSpec::zmod(step), subgroup);
            q.step_ = step;
            return q;
        }
        case GroupKind::f2: {
            std::vector<std::uint64_t> basis;
            for (const auto e : subgroup) {
                auto v = static_cast<std::uint64_t>(e.value);
                for (const auto b : basis)
                    if ((v ^ b) < v) v ^= b;
                if (!v) continue;
                for (auto& b : basis)
                    if ((b ^ v) < b && (b >> (63 - std::countl_zero(v)) & 1)) b ^= v;
                basis.push_back(v);
                std::sort(basis.rbegin(), basis.rend());
                if ((std::uint64_t{1} << basis.size()) == subgroup.size()) break;
            }
            if ((std::uint64_t{1} << basis.size()) != subgroup.size())
                fail(ErrorCode::invalid_argument, "set is not a subgroup of " + g.to_string());
            QuotientMap q(g, GroupSpec::f2(g.dimension() - static_cast<int>(basis.size())), subgroup);
            for (const auto b : basis) q.pivot_mask_ |= std::uint64_t{1} << (63 - std::countl_zero(b));
            for (int i = 0; i < g.dimension(); ++i)
                if (!(q.pivot_mask_ >> i & 1)) q.free_.push_back(i);
            q.f2_basis_ = std::move(basis);
            return q;
        }
        case GroupKind::fp: {
            const std::uint64_t p = g.prime();
            const int n = g.dimension();
            std::vector<std::vector<std::uint64_t>> basis;
            std::vector<int> pivots;
            std::uint64_t span = 1;
            for (const auto e : subgroup) {
                auto v = g.coordinates(e);
                for (std::size_t k = 0; k < basis.size(); ++k) {
                    const auto c = v[static_cast<std::size_t>(pivots[k])];
                    if (!c) continue;
                    for (int i = 0; i < n; ++i)
                        v[static_cast<std::size_t>(i)] = (v[static_cast<std::size_t>(i)] + (p - c) * basis[k][static_cast<std::size_t>(i)]) % p;
                }
                int piv = -1;
                for (int i = 0; i < n; ++i)
                    if (v[static_cast<std::size_t>(i)]) {
                        piv = i;
                        break;
                    }
                if (piv < 0) continue;
                const auto inv = modinv(v[static_cast<std::size_t>(piv)], p);
                for (auto& x : v) x = x * inv % p;
                for (auto& b : basis) {
                    const auto c = b[static_cast<std::size_t>(piv)];
                    if (!c) continue;
                    for (int i = 0; i < n; ++i)
                        b[static_cast<std::size_t>(i)] = (b[static_cast<std::size_t>(i)] + (p - c) * v[static_cast<std::size_t>(i)]) % p;
                }
                basis.push_back(std::move(v));
                pivots.push_back(piv);
                span *= p;
                if (span == subgroup.size()) break;
            }
            if (span != subgroup.size()) fail(ErrorCode::invalid_argument, "set is not a subgroup of " + g.to_string());
            QuotientMap q(g, GroupSpec::fp(p, n - static_cast<int>(basis.size())), subgroup);
            std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
            for (const auto piv : pivots) is_pivot[static_cast<std::size_t>(piv)] = true;
            for (int i = 0; i < n; ++i)
                if (!is_pivot[static_cast<std::size_t>(i)]) q.free_.push_back(i);
            q.basis_ = std::move(basis);
            q.pivots_ = std::move(pivots);
            return q;
        }
    }
    return std::nullopt;
}

Elem QuotientMap::project(Elem x) const {
    ambient_.check(x);
    switch (ambient_.kind()) {
        case GroupKind::zmod: return Elem{static_cast<std::int64_t>(static_cast<std::uint64_t>(x.value) % step_)};
        case GroupKind::f2: {
            auto v = static_cast<std::uint64_t>(x.value);
            for (const auto b : f2_basis_)
                if (v >> (63 - std::countl_zero(b)) & 1) v ^= b;
            std::uint64_t y = 0;
            for (std::size_t i = 0; i < free_.size(); ++i) y |= (v >> free_[i] & 1) << i;
            return Elem{static_cast<std::int64_t>(y)};
        }
        case GroupKind::fp: {
            const std::uint64_t p = ambient_.prime();
            auto v = ambient_.coordinates(x);
            for (std::size_t k = 0; k < basis_.size(); ++k) {
                const auto c = v[static_cast<std::size_t>(pivots_[k])];
                if (!c) continue;
                for (std::size_t i = 0; i < v.size(); ++i) v[i] = (v[i] + (p - c) * basis_[k][i]) % p;
            }
            std::vector<std::uint64_t> y;
            y.reserve(free_.size());
            for (const auto i : free_) y.push_back(v[static_cast<std::size_t>(i)]);
            return quotient_.from_coordinates(y);
        }
        case GroupKind::z: break;
    }
    fail(ErrorCode::internal_error, "quotient of the integers");
}

Elem QuotientMap::lift(Elem y) const {
    quotient_.check(y);
    switch (ambient_.kind()) {
        case GroupKind::zmod: return y;
        case GroupKind::f2: {
            const auto v = static_cast<std::uint64_t>(y.value);
            std::uint64_t x = 0;
            for (std::size_t i = 0; i < free_.size(); ++i) x |= (v >> i & 1) << free_[i];
            return Elem{static_cast<std::int64_t>(x)};
        }
        case GroupKind::fp: {
            const auto c = quotient_.coordinates(y);
            std::vector<std::uint64_t> x(static_cast<std::size_t>(ambient_.dimension()), 0);
            for (std::size_t i = 0; i < free_.size(); ++i) x[static_cast<std::size_t>(free_[i])] = c[i];
            return ambient_.from_coordinates(x);
        }
        case GroupKind::z: break;
    }
    fail(ErrorCode::internal_error, "quotient of the integers");
}

FiniteSet QuotientMap::project_set(const FiniteSet& s) const {
    require_same_group(s.group(), ambient_);
    std::vector<Elem> out;
    out.reserve(s.size() / kernel_.size() + 1);
    for (const auto x : s) out.push_back(project(x));
    return FiniteSet(quotient_, std::move(out));
}

FiniteSet QuotientMap::lift_set(const FiniteSet& s) const {
    require_same_group(s.group(), quotient_);
    std::vector<Elem> out;
    out.reserve(s.size() * kernel_.size());
    arith::dispatch(ambient_, [&](auto ops) {
        for (const auto y : s) {
            const auto base = lift(y).value;
            for (const auto k : kernel_) out.push_back(Elem{ops.add(base, k.value)});
        }
    });
    return FiniteSet(ambient_, std::move(out));
}

}  // namespace freiman
