#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <limits>
#include <map>

#include "freiman/generators.hpp"
#include "freiman/set_engine.hpp"
#include "freiman/set_io.hpp"
#include "support.hpp"

using namespace freiman;
using fixtures::in;
using fixtures::ints;
using fixtures::q;

namespace {

FiniteSet random_set(const GroupSpec& g, std::uint64_t size, std::uint64_t seed) {
    if (g.kind() == GroupKind::z) return gen_random_interval(-500, 500, size, seed);
    return gen_random(g, size, seed);
}

const GroupSpec kGroups[] = {GroupSpec::f2(9), GroupSpec::fp(3, 5), GroupSpec::fp(7, 2), GroupSpec::zmod(331),
                             GroupSpec::integers()};

}  // namespace

TEST_SUITE("set_engine") {

TEST_CASE("oracle: {0,1,3} in Z") {
    const auto a = ints({0, 1, 3});
    const auto oracle = energy_oracle(a);
    CHECK(oracle.quadruples == 15);
    CHECK(oracle.denominator == 27);
    CHECK(energy_exact(a, DiffMethod::pairs).quadruples == 15);
    CHECK(energy_exact(a, DiffMethod::transform).quadruples == 15);
    CHECK(oracle.normalized() == q(5, 9));

    const auto d = diff_set(a, a);
    CHECK(d == ints({-3, -2, -1, 0, 1, 2, 3}));
    const auto ed = energy_oracle(d);
    CHECK(ed.quadruples == 231);
    CHECK(ed.denominator == 343);
    CHECK(energy_exact(d).normalized() == q(231, 343));

    const auto st = doubling_stats(a);
    CHECK(st.k_diff == q(7, 3));
    CHECK(st.k_sum == q(2));
    CHECK(sum_set(a, a) == ints({0, 1, 2, 3, 4, 6}));
}

TEST_CASE("oracle: Sidon sets") {
    // all differences distinct: Q = 2|A|^2 - |A|
    const auto z = ints({0, 1, 3, 7});
    CHECK(energy_oracle(z).quadruples == 28);
    CHECK(energy_exact(z).quadruples == 28);

    // characteristic 2: a - b = b - a, so Q = 3|A|^2 - 2|A|
    const auto f2 = in(GroupSpec::f2(4), {0, 1, 2, 4, 8});
    CHECK(energy_oracle(f2).quadruples == 3 * 25 - 2 * 5);
    CHECK(energy_exact(f2, DiffMethod::transform).quadruples == 65);
}

TEST_CASE("exact energy paths agree with the oracle on every group") {
    for (const auto& g : kGroups) {
        CAPTURE(g.to_string());
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            const auto a = random_set(g, 1 + seed % 30, seed);
            const auto oracle = energy_oracle(a).quadruples;
            CHECK(energy_exact(a, DiffMethod::pairs).quadruples == oracle);
            CHECK(energy_exact(a, DiffMethod::transform).quadruples == oracle);
        }
    }
}

TEST_CASE("transform and pair tables agree on larger sets") {
    const GroupSpec groups[] = {GroupSpec::f2(12), GroupSpec::fp(3, 7), GroupSpec::zmod(5000), GroupSpec::zmod(4096),
                                GroupSpec::integers()};
    for (const auto& g : groups) {
        CAPTURE(g.to_string());
        const auto a = g.kind() == GroupKind::z ? gen_random_interval(-3000, 4000, 400, 5) : gen_random(g, 400, 5);
        const auto t1 = diff_table(a, DiffMethod::pairs);
        const auto t2 = diff_table(a, DiffMethod::transform);
        REQUIRE(t1.size() == t2.size());
        CHECK(std::equal(t1.support().begin(), t1.support().end(), t2.support().begin()));
        CHECK(std::equal(t1.counts().begin(), t1.counts().end(), t2.counts().begin()));
    }
}

TEST_CASE("difference table identities") {
    for (const auto& g : kGroups) {
        CAPTURE(g.to_string());
        for (std::uint64_t seed = 100; seed < 130; ++seed) {
            const auto a = random_set(g, 1 + seed % 40, seed);
            const auto t = diff_table(a);
            std::uint64_t total = 0;
            for (std::size_t i = 0; i < t.size(); ++i) {
                total += t.counts()[i];
                CHECK(t.count(g.neg(t.support()[i])) == t.counts()[i]);
                CHECK(translate_intersect(a, t.support()[i]).size() == t.counts()[i]);
            }
            CHECK(total == a.size() * a.size());
            CHECK(t.count(g.identity()) == a.size());
            CHECK(t.support_set() == diff_set(a, a));
            const auto e = energy_from_table(t).normalized();
            CHECK(e <= 1);
            CHECK(e * Rational(t.size(), a.size()) >= 1);
        }
    }
}

TEST_CASE("sumset and difference set match brute force") {
    for (const auto& g : kGroups) {
        CAPTURE(g.to_string());
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto a = random_set(g, 3 + seed, seed), b = random_set(g, 7, seed + 50);
            CHECK(sum_set(a, b) == fixtures::naive_sum(a, b));
            CHECK(diff_set(a, b) == fixtures::naive_diff(a, b));
        }
    }
}

// Coordinate-level reference, independent of the payload arithmetic.
TEST_CASE("F_p^n chunked loops match coordinate arithmetic") {
    for (const auto& g : {GroupSpec::fp(3, 9), GroupSpec::fp(5, 5), GroupSpec::fp(7, 3), GroupSpec::fp(251, 3),
                          GroupSpec::fp(257, 2), GroupSpec::fp(3, 39)}) {
        CAPTURE(g.to_string());
        const auto p = g.prime();
        auto combine = [&](Elem x, Elem y, bool subtract) {
            auto cx = g.coordinates(x);
            const auto cy = g.coordinates(y);
            for (std::size_t i = 0; i < cx.size(); ++i) cx[i] = subtract ? (cx[i] + p - cy[i]) % p : (cx[i] + cy[i]) % p;
            return g.from_coordinates(cx);
        };
        const auto a = gen_random(g, 150, 3), b = gen_random(g, 140, 4);
        std::vector<Elem> sums, diffs;
        for (const auto x : a)
            for (const auto y : b) {
                sums.push_back(combine(x, y, false));
                diffs.push_back(combine(x, y, true));
            }
        CHECK(sum_set(a, b) == FiniteSet(g, std::move(sums)));
        CHECK(diff_set(a, b) == FiniteSet(g, std::move(diffs)));

        const auto t = diff_table(a, DiffMethod::pairs);
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < t.size(); ++i) total += t.counts()[i];
        CHECK(total == a.size() * a.size());
        CHECK(std::ranges::equal(t.support(), diff_set(a, a).elements()));
        for (const auto x : a) {
            CHECK(g.sub(x, a.front()) == combine(x, a.front(), true));
            CHECK(g.neg(x) == combine(g.identity(), x, true));
        }
    }
}

TEST_CASE("wide-window pair tables match a naive count") {
    const std::int64_t big = std::int64_t{1} << 61;
    // segmented path: window at most 64 |A|^2; hashed path otherwise
    const FiniteSet sets[] = {
        gen_random_interval(-15'000'000, 15'000'000, 1000, 8),
        gen_random_interval(big, big + 30'000'000, 1000, 9),
        gen_random_interval(-big - 30'000'000, -big, 1000, 10),
        gen_random(GroupSpec::zmod(60'000'001), 1000, 12),
        in(GroupSpec::zmod(100'000'000), {0, 1, 99'999'999, 50'000'000, 12'345'678}),
        gen_random_interval(-1'000'000'000, 1'000'000'000, 300, 8),
        gen_random(GroupSpec::zmod(std::uint64_t{1} << 40), 200, 13),
    };
    for (const auto& a : sets) {
        CAPTURE(a.group().to_string());
        CAPTURE(a.size());
        std::map<Elem, std::uint64_t> naive;
        for (const auto x : a)
            for (const auto y : a) ++naive[a.group().sub(x, y)];
        const auto t = diff_table(a, DiffMethod::pairs);
        std::vector<Elem> support;
        std::vector<std::uint64_t> counts;
        for (const auto& [e, c] : naive) {
            support.push_back(e);
            counts.push_back(c);
        }
        CHECK(std::ranges::equal(t.support(), support));
        CHECK(std::ranges::equal(t.counts(), counts));
    }
}

TEST_CASE("integer extremes") {
    const auto a = ints({std::numeric_limits<std::int64_t>::min(), std::numeric_limits<std::int64_t>::max()});
    CHECK_THROWS_AS(diff_set(a, a), Error);
    const auto b = ints({std::numeric_limits<std::int64_t>::max() - 2, std::numeric_limits<std::int64_t>::max()});
    CHECK(translate_intersect(b, Elem{2}) == ints({std::numeric_limits<std::int64_t>::max()}));
}

TEST_CASE("oracle cap and empty inputs") {
    const auto big = gen_random(GroupSpec::f2(10), 65, 1);
    try {
        energy_oracle(big);
        FAIL("expected cap");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::cap_exceeded);
    }
    CHECK_THROWS_AS(build_set(GroupSpec::integers(), {}), Error);
    CHECK_THROWS_AS(diff_table(FiniteSet(GroupSpec::integers())), Error);
}

TEST_CASE("cosets and subgroups") {
    const auto h = gen_subspace(GroupSpec::f2(8), 3);
    CHECK(is_coset(h));
    CHECK(is_coset(translate(h, Elem{0x50})));
    CHECK(energy_exact(h).normalized() == 1);
    CHECK(doubling_stats(h).k_diff == 1);
    CHECK_FALSE(is_coset(ints({0, 1, 3})));
    CHECK(is_coset(ints({5})));
    const auto zm = in(GroupSpec::zmod(12), {1, 4, 7, 10});
    CHECK(is_coset(zm));
    CHECK(is_subset(in(GroupSpec::zmod(12), {4, 10}), zm));
    CHECK_FALSE(is_subset(in(GroupSpec::zmod(12), {4, 5}), zm));
}

TEST_CASE("translate-heavy set on {0,1,3}") {
    const auto a = ints({0, 1, 3});
    CHECK(translate_heavy_set(a, q(2, 3)) == ints({0}));
    CHECK(translate_heavy_set(a, q(1, 3)) == ints({-3, -2, -1, 0, 1, 2, 3}));
    CHECK(translate_heavy_set(a, q(1)) == ints({0}));
    CHECK_THROWS_AS(translate_heavy_set(a, q(0)), Error);
}

TEST_CASE("stabilizer and quotient maps") {
    SUBCASE("f2") {
        const auto a = gen_r_plus_h(RPlusHSpec{10, 3, 6, 2});
        const auto p = stabilizer(diff_table(a));
        CHECK(p == gen_subspace(GroupSpec::f2(10), 3));
        const auto qm = QuotientMap::make(p);
        REQUIRE(qm);
        CHECK(qm->quotient() == GroupSpec::f2(7));
        const auto abar = qm->project_set(a);
        CHECK(abar.size() == 6);
        CHECK(qm->lift_set(abar) == a);
        CHECK(energy_exact(abar).normalized() == energy_exact(a).normalized());
    }
    SUBCASE("fp with a non-coordinate subgroup") {
        const auto g = GroupSpec::fp(3, 3);
        // P = span{(1,1,0)}
        const auto v = g.from_coordinates(std::vector<std::uint64_t>{1, 1, 0});
        const auto p = FiniteSet(g, {g.identity(), v, g.add(v, v)});
        const auto qm = QuotientMap::make(p);
        REQUIRE(qm);
        CHECK(*qm->quotient().order() == 9);
        CounterRng rng(4);
        for (int i = 0; i < 200; ++i) {
            const Elem x{static_cast<std::int64_t>(rng.below(27))}, y{static_cast<std::int64_t>(rng.below(27))};
            CHECK(qm->project(g.add(x, y)) == qm->quotient().add(qm->project(x), qm->project(y)));
            CHECK(qm->project(qm->lift(qm->project(x))) == qm->project(x));
            CHECK(qm->project(g.add(x, v)) == qm->project(x));
        }
    }
    SUBCASE("zmod") {
        const auto g = GroupSpec::zmod(12);
        const auto a = in(g, {0, 4, 8, 1, 5, 9});
        const auto p = stabilizer(diff_table(a));
        CHECK(p == in(g, {0, 4, 8}));
        const auto qm = QuotientMap::make(p);
        REQUIRE(qm);
        CHECK(qm->quotient() == GroupSpec::zmod(4));
        CHECK(qm->lift_set(qm->project_set(a)) == a);
    }
    SUBCASE("trivial and non-subgroup inputs") {
        CHECK_FALSE(QuotientMap::make(in(GroupSpec::f2(4), {0})));
        CHECK_THROWS_AS(QuotientMap::make(in(GroupSpec::f2(4), {0, 1, 2})), Error);
        CHECK(stabilizer(diff_table(ints({0, 1, 3}))) == ints({0}));
    }
}

TEST_CASE("set files round-trip bit-exactly") {
    const auto dir = std::filesystem::temp_directory_path() / "freiman_set_io";
    std::filesystem::create_directories(dir);
    const FiniteSet sets[] = {gen_random(GroupSpec::f2(20), 50, 1), gen_random(GroupSpec::fp(5, 3), 30, 2),
                              gen_random(GroupSpec::zmod(1000), 30, 3), ints({-7, 0, 3, 1000000000000})};
    for (const auto& s : sets) {
        const auto text = format_set_text(s);
        CHECK(parse_set_text(text) == s);
        CHECK(format_set_text(parse_set_text(text)) == text);
        const auto path = dir / "s.txt";
        write_set_file(path, s);
        CHECK(read_set_file(path) == s);
    }
    CHECK(format_set_text(ints({3, 0, 1})) == "group z\n0\n1\n3\n");
}

TEST_CASE("set file parsing details") {
    const auto s = parse_set_text("# corpus member\ngroup fp p=3 n=2\n1,2  # tail comment\n\n0,0\n1,2\n");
    CHECK(s.group() == GroupSpec::fp(3, 2));
    CHECK(s.size() == 2);
    CHECK(parse_set_text("0x3\n0x1\n", GroupSpec::f2(4)).size() == 2);
    CHECK_THROWS_AS(parse_set_text("0x3\n"), Error);
    CHECK_THROWS_AS(parse_set_text("group f2 n=4\n0x3\n", GroupSpec::f2(5)), Error);
    try {
        parse_set_text("group zmod m=5\n1\n9\n");
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_element);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(read_set_file("/nonexistent/freiman.txt"), Error);
}

}  // TEST_SUITE
