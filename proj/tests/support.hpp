#pragma once

#include <initializer_list>
#include <vector>

#include "freiman/set_engine.hpp"

namespace fixtures {

inline freiman::FiniteSet ints(std::initializer_list<std::int64_t> xs) {
    std::vector<freiman::Elem> v;
    for (const auto x : xs) v.push_back(freiman::Elem{x});
    return freiman::FiniteSet(freiman::GroupSpec::integers(), std::move(v));
}

inline freiman::FiniteSet in(const freiman::GroupSpec& g, std::initializer_list<std::int64_t> xs) {
    std::vector<freiman::Elem> v;
    for (const auto x : xs) v.push_back(freiman::Elem{x});
    return freiman::FiniteSet(g, std::move(v));
}

inline freiman::Rational q(long long num, long long den = 1) { return freiman::Rational(num, den); }

// brute-force A - B
inline freiman::FiniteSet naive_diff(const freiman::FiniteSet& a, const freiman::FiniteSet& b) {
    std::vector<freiman::Elem> v;
    for (const auto x : a)
        for (const auto y : b) v.push_back(a.group().sub(x, y));
    return freiman::FiniteSet(a.group(), std::move(v));
}

inline freiman::FiniteSet naive_sum(const freiman::FiniteSet& a, const freiman::FiniteSet& b) {
    std::vector<freiman::Elem> v;
    for (const auto x : a)
        for (const auto y : b) v.push_back(a.group().add(x, y));
    return freiman::FiniteSet(a.group(), std::move(v));
}

}  // namespace fixtures
