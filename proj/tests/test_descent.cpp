#include "rspin/descent.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace rspin;

namespace {

Rational rat(long n, long d = 1) { return make_rational(n, d); }

// Iterates single descent steps from the lowest admissible base entry.
DescentFactor iterated_descent(long mtilde, int r)
{
    long base = mtilde % r;
    long steps = mtilde / r;
    if (base == r - 1) {
        base = -1;
        ++steps;
    }
    TypeTuple t({static_cast<int>(base)}, r);
    DescentFactor total;
    for (long s = 0; s < steps; ++s) {
        const auto step = descent_step(t, 0);
        total = step.factor * total;
        t = step.shifted;
    }
    REQUIRE(t.entries()[0] == mtilde);
    return total;
}

} // namespace

TEST_CASE("index decomposition")
{
    auto ip = decompose_index(7, 3);
    CHECK(ip.a == 2);
    CHECK(ip.m == 1);
    CHECK_FALSE(ip.vanishing());
    ip = decompose_index(5, 3);
    CHECK(ip.a == 1);
    CHECK(ip.m == 2);
    CHECK(ip.vanishing());
    ip = decompose_index(0, 2);
    CHECK(ip.a == 0);
    CHECK(ip.m == 0);
    CHECK_FALSE(ip.vanishing());
    CHECK(ip.tilde() == 0);
    CHECK_THROWS_AS(decompose_index(-1, 3), Error);
}

TEST_CASE("r-factorial")
{
    for (int r = 2; r <= 5; ++r)
        for (int m = 0; m < r; ++m)
            CHECK(r_factorial(0, m, r) == 1);
    CHECK(r_factorial(2, 1, 3) == 10);
    CHECK(r_factorial(1, 0, 2) == 1);
    CHECK(r_factorial(2, 0, 2) == 3); // [3]_2

    for (int r = 2; r <= 5; ++r)
        for (int m = 0; m < r; ++m)
            for (int a = 0; a <= 10; ++a)
                REQUIRE(r_factorial(a + 1, m, r) == rat(r * a + m + 1) * r_factorial(a, m, r));
}

TEST_CASE("single descent step")
{
    auto s = descent_step(TypeTuple({0, 0, 0}, 2), 0);
    CHECK(s.factor == DescentFactor(rat(-1, 2), 1));
    CHECK(s.shifted == TypeTuple({2, 0, 0}, 2));

    s = descent_step(TypeTuple({-1, 0}, 3), 0);
    CHECK(s.factor.scalar == 0);
    CHECK(s.factor.str() == "0");

    s = descent_step(TypeTuple({1, 0}, 2), 0);
    CHECK(s.factor == DescentFactor(rat(-1), 1));
    CHECK(s.factor.str() == "-1*psi");
    CHECK(s.shifted == TypeTuple({3, 0}, 2));

    CHECK_THROWS_AS(TypeTuple({-1, -1, 0}, 3), Error);
    CHECK_THROWS_AS(TypeTuple({-2}, 3), Error);
    CHECK_THROWS_AS(descent_step(TypeTuple({0}, 3), 1), Error);
}

TEST_CASE("closed-form descent")
{
    auto cf = descent_closed_form(TypeTuple({2, 0, 0}, 2));
    CHECK(cf.positions[0].factor == DescentFactor(rat(-1, 2), 1));
    CHECK(cf.positions[1].factor == DescentFactor(rat(1), 0));
    CHECK(cf.base == TypeTuple({0, 0, 0}, 2));
    CHECK(cf.positions[0].factor == descent_step(TypeTuple({0, 0, 0}, 2), 0).factor);

    cf = descent_closed_form(TypeTuple({7}, 3));
    CHECK(cf.positions[0].factor == DescentFactor(rat(10, 9), 2));
    CHECK(cf.positions[0].factor.str() == "10/9*psi^2");
    CHECK(cf.base == TypeTuple({1}, 3));

    cf = descent_closed_form(TypeTuple({1}, 2));
    CHECK(cf.positions[0].factor.scalar == 0);
    CHECK(cf.positions[0].vanishing);
    CHECK(cf.total_scalar() == 0);
}

TEST_CASE("closed form equals iterated steps")
{
    for (int r = 2; r <= 5; ++r)
        for (long mt = 0; mt <= 30; ++mt) {
            INFO("r=" << r << " mt=" << mt);
            const auto cf = descent_closed_form(TypeTuple({static_cast<int>(mt)}, r));
            REQUIRE(cf.positions[0].factor == iterated_descent(mt, r));
        }
}

TEST_CASE("descent implies vanishing")
{
    for (int r = 2; r <= 5; ++r)
        for (int other = 0; other < r; ++other) {
            // m = (r-1, other) descends from (-1, other)
            const TypeTuple below({-1, other}, r);
            const auto step = descent_step(below, 0);
            CHECK(step.shifted == TypeTuple({r - 1, other}, r));
            CHECK(step.factor.scalar == 0);
        }
}

TEST_CASE("change-of-variables coefficient")
{
    for (int r = 2; r <= 5; ++r)
        for (int m = 0; m < r; ++m)
            CHECK(variable_map_coefficient(0, m, r) == 1);
    CHECK(variable_map_coefficient(1, 0, 2) == -2);
    CHECK(variable_map_coefficient(2, 1, 3) == rat(9, 10));
    CHECK_THROWS_AS(variable_map_coefficient(0, 3, 3), Error);

    for (int r = 2; r <= 5; ++r)
        for (int m = 0; m < r; ++m)
            for (int a = 0; a <= 10; ++a)
                REQUIRE(variable_map_coefficient(a, m, r) * descent_coefficient(a, m, r) == 1);
}

TEST_CASE("virtual degree")
{
    CHECK(virtual_degree(TypeTuple({0, 0, 0, 0}, 2, 0)) == 0);
    CHECK(virtual_degree(TypeTuple({1, 1, 1}, 3, 0)) == rat(2, 3));
    CHECK(virtual_degree(TypeTuple({0, 0, 1}, 3, 0)) == 0);
    CHECK(virtual_degree(TypeTuple({}, 4, 2)) == rat(2, 4));

    std::mt19937 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const int r = std::uniform_int_distribution<int>(2, 7)(rng);
        const int g = std::uniform_int_distribution<int>(0, 4)(rng);
        const int n = std::uniform_int_distribution<int>(1, 6)(rng);
        std::vector<int> entries;
        for (int i = 0; i < n; ++i)
            entries.push_back(std::uniform_int_distribution<int>(0, 3 * r)(rng));
        const TypeTuple t(entries, r, g);
        const auto i = static_cast<std::size_t>(std::uniform_int_distribution<int>(0, n - 1)(rng));
        REQUIRE(virtual_degree(t.shifted(i)) - virtual_degree(t) == 1);
    }
}
