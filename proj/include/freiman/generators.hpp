#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "freiman/set_engine.hpp"

namespace freiman {

/// SplitMix64 evaluated in counter mode: draw i is mix(seed + (i + 1) * golden_gamma).
/// Outputs depend only on (seed, i), so streams are identical on every platform.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() { return at(counter_++); }
    result_type at(std::uint64_t index) const;
    std::uint64_t counter() const noexcept { return counter_; }

    /// Uniform integer in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// k distinct values of [0, population), in ascending order.
std::vector<std::uint64_t> sample_without_replacement(std::uint64_t population, std::uint64_t k, CounterRng& rng);

struct RandomSpec {
    GroupSpec group = GroupSpec::integers();
    std::uint64_t size = 0;
    std::uint64_t seed = 0;
    // Sampling window for the integers: [lo, hi].
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

struct SubspaceSpec {
    GroupSpec group = GroupSpec::f2(1);
    int dim = 0;
};

struct RPlusHSpec {
    int n = 0;
    int dim_h = 0;
    std::uint64_t r_count = 0;
    std::uint64_t seed = 0;
};

struct GapSpec {
    std::int64_t base = 0;
    std::vector<std::int64_t> steps;
    std::vector<std::uint64_t> lengths;
};

using GeneratorSpec = std::variant<RandomSpec, SubspaceSpec, RPlusHSpec, GapSpec>;

/// "random group=f2 n=20 size=32 seed=1", "subspace group=fp p=3 n=4 d=2",
/// "r-plus-h n=20 dh=8 r=32 seed=7", "gap base=0 steps=1,100 lens=5,5".
GeneratorSpec parse_generator_spec(std::string_view text);
std::string to_string(const GeneratorSpec& spec);

FiniteSet gen_random(const GroupSpec& g, std::uint64_t size, std::uint64_t seed);
FiniteSet gen_random_interval(std::int64_t lo, std::int64_t hi, std::uint64_t size, std::uint64_t seed);
FiniteSet gen_subspace(const GroupSpec& g, int dim);
FiniteSet gen_r_plus_h(const RPlusHSpec& spec);

struct GapResult {
    FiniteSet set;
    bool proper = false;
};
GapResult gen_gap(const GapSpec& spec);

FiniteSet generate(const GeneratorSpec& spec);

}  // namespace freiman
