#include <doctest.h>

#include "freiman/generators.hpp"
#include "support.hpp"

using namespace freiman;
using fixtures::q;

namespace {

bool sidon(const FiniteSet& a) {
    const auto t = diff_table(a);
    const auto& g = a.group();
    const std::uint64_t limit = g.kind() == GroupKind::f2 ? 2 : 1;  // x = -x in characteristic 2
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t.support()[i] != g.identity() && t.counts()[i] > limit) return false;
    return true;
}

}  // namespace

TEST_SUITE("generators") {

TEST_CASE("counter rng is SplitMix64") {
    CounterRng rng(0);
    CHECK(rng() == 0xe220a8397b1dcdafULL);
    CHECK(rng() == 0x6e789e6aa1b965f4ULL);
    CHECK(rng.counter() == 2);
    CHECK(CounterRng(0).at(1) == 0x6e789e6aa1b965f4ULL);
    CounterRng b(42);
    for (int i = 0; i < 1000; ++i) CHECK(b.below(7) < 7);
}

TEST_CASE("sampling without replacement") {
    CounterRng rng(3);
    const auto s = sample_without_replacement(1'000'000'000'000ULL, 50, rng);
    CHECK(s.size() == 50);
    CHECK(std::adjacent_find(s.begin(), s.end(), [](auto a, auto b) { return a >= b; }) == s.end());
    CounterRng r2(3);
    CHECK(sample_without_replacement(10, 10, r2) == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK_THROWS_AS(sample_without_replacement(3, 4, r2), Error);
}

TEST_CASE("gen_random") {
    CHECK(gen_random(GroupSpec::f2(2), 4, 9) == fixtures::in(GroupSpec::f2(2), {0, 1, 2, 3}));
    CHECK(gen_random(GroupSpec::fp(5, 3), 20, 1) == gen_random(GroupSpec::fp(5, 3), 20, 1));
    CHECK(gen_random(GroupSpec::fp(5, 3), 20, 1) != gen_random(GroupSpec::fp(5, 3), 20, 2));
    CHECK_THROWS_AS(gen_random(GroupSpec::f2(2), 5, 1), Error);
    CHECK_THROWS_AS(gen_random(GroupSpec::integers(), 5, 1), Error);
    const auto z = gen_random_interval(-10, 10, 21, 4);
    CHECK(z.size() == 21);
    CHECK(z.front().value == -10);

    const auto a = gen_random(GroupSpec::f2(20), 32, 1);
    CHECK(a.size() == 32);
    if (sidon(a)) CHECK(energy_exact(a).normalized() == q(3 * 32 * 32 - 2 * 32, 32 * 32 * 32));
}

TEST_CASE("gen_subspace") {
    const auto h = gen_subspace(GroupSpec::f2(12), 6);
    CHECK(h.size() == 64);
    CHECK(energy_exact(h).normalized() == 1);
    CHECK(doubling_stats(h).k_diff == 1);
    CHECK(gen_subspace(GroupSpec::f2(12), 0) == fixtures::in(GroupSpec::f2(12), {0}));
    CHECK(gen_subspace(GroupSpec::fp(3, 4), 2).size() == 9);
    CHECK(is_coset(gen_subspace(GroupSpec::fp(3, 4), 2)));
    CHECK_THROWS_AS(gen_subspace(GroupSpec::f2(4), 5), Error);
    CHECK_THROWS_AS(gen_subspace(GroupSpec::zmod(9), 1), Error);
}

TEST_CASE("gen_r_plus_h") {
    const auto a = gen_r_plus_h(RPlusHSpec{20, 8, 32, 7});
    CHECK(a.size() == 8192);
    const auto h = gen_subspace(GroupSpec::f2(20), 8);
    CHECK(sum_set(a, h) == a);

    const auto coset = gen_r_plus_h(RPlusHSpec{12, 5, 1, 3});
    CHECK(doubling_stats(coset).k_diff == 1);
    CHECK(energy_exact(coset).normalized() == 1);

    CHECK_THROWS_AS(gen_r_plus_h(RPlusHSpec{10, 10, 1, 0}), Error);
    CHECK_THROWS_AS(gen_r_plus_h(RPlusHSpec{10, 8, 5, 0}), Error);
}

TEST_CASE("R + H with R Sidon in the quotient") {
    // E(R + H) = E(R) in G/H, and a Sidon R in characteristic 2 has Q = 3|R|^2 - 2|R|.
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 20 && checked < 5; ++seed) {
        const RPlusHSpec spec{9, 2, 4, seed};
        const auto a = gen_r_plus_h(spec);
        std::vector<Elem> reps;
        for (const auto x : a)
            if ((x.value & 3) == 0) reps.push_back(Elem{x.value >> 2});
        const FiniteSet r(GroupSpec::f2(7), reps);
        if (!sidon(r)) continue;
        ++checked;
        const auto e = energy_oracle(a).normalized();
        CHECK(e == q(3 * 16 - 2 * 4, 64));
        CHECK(energy_exact(a).normalized() == e);
    }
    CHECK(checked > 0);
}

TEST_CASE("gen_gap") {
    const auto ap = gen_gap(GapSpec{0, {1}, {5}});
    CHECK(ap.proper);
    CHECK(ap.set == fixtures::ints({0, 1, 2, 3, 4}));
    CHECK(doubling_stats(ap.set).k_diff == q(9, 5));

    const auto two = gen_gap(GapSpec{0, {1, 100}, {5, 5}});
    CHECK(two.proper);
    CHECK(two.set.size() == 25);
    CHECK(doubling_stats(two.set).k_diff == q(81, 25));

    const auto bad = gen_gap(GapSpec{0, {1, 2, 4}, {3, 3, 3}});
    CHECK_FALSE(bad.proper);
    CHECK(bad.set.size() < 27);

    CHECK_THROWS_AS(gen_gap(GapSpec{std::numeric_limits<std::int64_t>::max(), {1}, {2}}), Error);
    CHECK_THROWS_AS(gen_gap(GapSpec{0, {1, 2}, {3}}), Error);
    CHECK_THROWS_AS(gen_gap(GapSpec{0, {1}, {0}}), Error);
}

TEST_CASE("proper GAPs with proper difference GAPs") {
    for (std::int64_t s2 = 7; s2 < 30; s2 += 3) {
        const GapSpec spec{3, {1, s2}, {3, 3}};
        const auto g = gen_gap(spec);
        CHECK(diff_set(g.set, g.set).size() == 25);
        CHECK(g.proper);
    }
    const auto g3 = gen_gap(GapSpec{0, {1, 10, 100}, {3, 4, 2}});
    CHECK(g3.proper);
    CHECK(diff_set(g3.set, g3.set).size() == 5 * 7 * 3);
}

TEST_CASE("generator spec text") {
    const char* specs[] = {"random group=f2 n=20 size=32 seed=1", "random group=fp p=3 n=4 size=20 seed=1",
                           "random group=zmod m=97 size=10 seed=2", "random group=z lo=-5 hi=5 size=4 seed=0",
                           "subspace group=f2 n=12 d=6", "subspace group=fp p=3 n=4 d=2",
                           "r-plus-h n=20 dh=8 r=32 seed=7", "gap base=0 steps=1,100 lens=5,5"};
    for (const auto* s : specs) {
        CAPTURE(s);
        CHECK(to_string(parse_generator_spec(s)) == s);
    }
    CHECK(to_string(parse_generator_spec("subspace n=12 d=6")) == "subspace group=f2 n=12 d=6");
    CHECK(to_string(parse_generator_spec("r-plus-h n=20 dH=8 r=32 seed=7")) == "r-plus-h n=20 dh=8 r=32 seed=7");
    CHECK(generate(parse_generator_spec("gap rank=2 steps=1,100 lens=5,5")).size() == 25);
    CHECK_THROWS_AS(parse_generator_spec("gap rank=3 steps=1,100 lens=5,5"), Error);
    CHECK_THROWS_AS(parse_generator_spec("random group=f2 n=4 size=2 colour=red"), Error);
    CHECK_THROWS_AS(parse_generator_spec("spiral n=3"), Error);
    CHECK_THROWS_AS(parse_generator_spec("r-plus-h n=20 r=32"), Error);
    CHECK_THROWS_AS(parse_generator_spec("r-plus-h n=x dh=8 r=32"), Error);
}

}  // TEST_SUITE
