#include <doctest.h>

#include <limits>

#include "freiman/generators.hpp"
#include "freiman/group.hpp"
#include "freiman/rational.hpp"
#include "support.hpp"

using namespace freiman;
using fixtures::q;

TEST_SUITE("group") {

TEST_CASE("group headers parse and print canonically") {
    CHECK(GroupSpec::parse("group f2 n=12").to_string() == "f2 n=12");
    CHECK(GroupSpec::parse("fp n=2 p=3").to_string() == "fp p=3 n=2");
    CHECK(GroupSpec::parse("zmod m=7").to_string() == "zmod m=7");
    CHECK(GroupSpec::parse("  z ") == GroupSpec::integers());
    CHECK(*GroupSpec::fp(3, 4).order() == 81);
    CHECK_FALSE(GroupSpec::integers().order());

    CHECK_THROWS_AS(GroupSpec::parse("fp p=4 n=2"), Error);
    CHECK_THROWS_AS(GroupSpec::parse("f2 n=64"), Error);
    CHECK_THROWS_AS(GroupSpec::parse("zmod m=0"), Error);
    CHECK_THROWS_AS(GroupSpec::parse("f2 n=3 p=2"), Error);
    CHECK_THROWS_AS(GroupSpec::parse("torus n=2"), Error);
    CHECK_THROWS_AS(GroupSpec::parse("fp p=3"), Error);
}

TEST_CASE("element grammar per kind") {
    const auto f2 = GroupSpec::f2(5);
    CHECK(f2.parse_elem("0x1f").value == 31);
    CHECK(f2.parse_elem("10011").value == 0b10011);
    CHECK(f2.format(Elem{0b10011}) == "0x13");
    CHECK_THROWS_AS(f2.parse_elem("0x20"), Error);
    CHECK_THROWS_AS(f2.parse_elem("1001"), Error);
    CHECK_THROWS_AS(f2.parse_elem("10021"), Error);

    const auto fp = GroupSpec::fp(3, 2);
    const auto e = fp.parse_elem("1,2");
    CHECK(e.value == 1 + 2 * 3);
    CHECK(fp.format(e) == "1,2");
    CHECK(fp.coordinates(e) == std::vector<std::uint64_t>{1, 2});
    CHECK_THROWS_AS(fp.parse_elem("3,0"), Error);
    CHECK_THROWS_AS(fp.parse_elem("1"), Error);

    const auto zm = GroupSpec::zmod(7);
    CHECK(zm.parse_elem("6").value == 6);
    CHECK_THROWS_AS(zm.parse_elem("7"), Error);
    CHECK_THROWS_AS(zm.parse_elem("-1"), Error);

    const auto z = GroupSpec::integers();
    CHECK(z.parse_elem("-5").value == -5);
    CHECK(z.format(Elem{-5}) == "-5");
    CHECK_THROWS_AS(z.parse_elem("5x"), Error);
}

TEST_CASE("integer arithmetic reports overflow") {
    const auto z = GroupSpec::integers();
    const Elem big{std::numeric_limits<std::int64_t>::max()};
    try {
        z.add(big, Elem{1});
        FAIL("expected overflow");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::overflow);
    }
    CHECK_THROWS_AS(z.neg(Elem{std::numeric_limits<std::int64_t>::min()}), Error);
}

TEST_CASE("group laws hold on random elements") {
    const GroupSpec groups[] = {GroupSpec::f2(13), GroupSpec::fp(5, 3), GroupSpec::fp(3, 7), GroupSpec::zmod(1009),
                                GroupSpec::integers()};
    CounterRng rng(11);
    for (const auto& g : groups) {
        CAPTURE(g.to_string());
        for (int i = 0; i < 300; ++i) {
            auto draw = [&] {
                if (g.kind() == GroupKind::z) return Elem{static_cast<std::int64_t>(rng.below(2'000'000)) - 1'000'000};
                return Elem{static_cast<std::int64_t>(rng.below(*g.order()))};
            };
            const auto a = draw(), b = draw(), c = draw();
            CHECK(g.add(a, g.add(b, c)) == g.add(g.add(a, b), c));
            CHECK(g.add(a, b) == g.add(b, a));
            CHECK(g.add(a, g.neg(a)) == g.identity());
            CHECK(g.sub(g.add(a, b), b) == a);
            CHECK(g.parse_elem(g.format(a)) == a);
            CHECK(g.from_coordinates(g.coordinates(a)) == a);
        }
    }
}

TEST_CASE("fast arithmetic agrees with checked arithmetic") {
    const auto g = GroupSpec::fp(7, 4);
    CounterRng rng(3);
    arith::dispatch(g, [&](auto ops) {
        for (int i = 0; i < 500; ++i) {
            const Elem a{static_cast<std::int64_t>(rng.below(*g.order()))}, b{static_cast<std::int64_t>(rng.below(*g.order()))};
            CHECK(ops.add(a.value, b.value) == g.add(a, b).value);
            CHECK(ops.sub(a.value, b.value) == g.sub(a, b).value);
        }
    });
}

TEST_CASE("primality") {
    CHECK(is_prime(2));
    CHECK(is_prime(1'000'000'007));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(561));
    CHECK(is_prime(18446744073709551557ULL));
}

}  // TEST_SUITE

TEST_SUITE("rational") {

TEST_CASE("parsing and printing") {
    CHECK(parse_rational("1/37") == q(1, 37));
    CHECK(parse_rational("0.25") == q(1, 4));
    CHECK(parse_rational("-3") == q(-3));
    CHECK(to_string(q(6, 4)) == "3/2");
    CHECK(to_string(q(8)) == "8");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("log2 bounds are exact on powers of two and bracket otherwise") {
    CHECK(log2_upper(q(16)) == 4.0);
    CHECK(log2_lower(q(1, 8)) == -3.0);
    std::int64_t e = 0;
    CHECK(is_power_of_two(q(1, 32), &e));
    CHECK(e == -5);
    CHECK_FALSE(is_power_of_two(q(3, 4)));
    const auto x = q(7, 3);
    CHECK(log2_lower(x) < std::log2(7.0 / 3.0));
    CHECK(log2_upper(x) > std::log2(7.0 / 3.0));
    CHECK(floor_log2(q(32, 5)) == 2);
    CHECK(floor_log2(q(1)) == 0);
}

TEST_CASE("exact power comparisons") {
    // (7/3)^(-36/37) ~ 0.438
    CHECK(at_least_power(q(231, 343), q(7, 3), q(36, 37)));
    CHECK_FALSE(at_least_power(q(2, 5), q(7, 3), q(36, 37)));
    CHECK(at_least_power(q(1, 4), q(4), q(1)));
    CHECK_FALSE(at_least_power(q(1, 4) - q(1, 1000000), q(4), q(1)));
    CHECK(at_least_power(q(1), q(1), q(5)));
    CHECK_FALSE(at_least_power(q(99, 100), q(1), q(5)));
}

}  // TEST_SUITE
