#include "rumor/error.hpp"
#include "rumor/history.hpp"

#include <catch_amalgamated.hpp>

using namespace rumor;
using Catch::Approx;

TEST_CASE("constant history returns the same state everywhere", "[history]")
{
    const StateVector x(0.99, 0, 0.01, 0, 0, 0);
    const auto h = HistoryFunction::constant(x, 1.0);
    CHECK(h.is_constant());
    CHECK(h.at(0.0) == x);
    CHECK(h.at(-3.7) == x);
    CHECK(h.at(-100.0) == x);
}

TEST_CASE("seeded spreaders put the remainder in S", "[history]")
{
    const auto h = HistoryFunction::seeded_spreaders(0.005, 1.0);
    CHECK(h.at(0).s() == Approx(0.995));
    CHECK(h.at(0).i() == 0.005);
    CHECK(h.at(0).total() == Approx(1.0));
}

TEST_CASE("sampled history interpolates linearly", "[history]")
{
    const StateVector a(1.0, 0, 0, 0, 0, 0);
    const StateVector b(0.9, 0, 0.1, 0, 0, 0);
    const StateVector c(0.8, 0, 0.2, 0, 0, 0);
    const auto h = HistoryFunction::sampled({a, b, c}, 4.0, 1.0);
    CHECK_FALSE(h.is_constant());
    CHECK(h.at(-4.0) == a);
    CHECK(h.at(-2.0).i() == Approx(0.1));
    CHECK(h.at(-3.0).i() == Approx(0.05));
    CHECK(h.at(-1.0).s() == Approx(0.85));
    CHECK(h.at(0.0) == c);
    CHECK(h.at(-9.0) == a);
    CHECK(h.at(1.0) == c);
}

TEST_CASE("history validation reports every bad sample", "[history]")
{
    const StateVector good(1.0, 0, 0, 0, 0, 0);
    const StateVector negative(1.1, 0, -0.1, 0, 0, 0);
    const StateVector wrong_sum(0.5, 0, 0, 0, 0, 0);
    try {
        HistoryFunction::sampled({good, negative, wrong_sum}, 2.0, 1.0);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.violations().size() == 2);
    }
    CHECK_THROWS_AS(HistoryFunction::constant(wrong_sum, 1.0), ConfigError);
    CHECK_THROWS_AS(HistoryFunction::sampled({good, good}, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(HistoryFunction::sampled({}, 1.0, 1.0), ConfigError);
}
