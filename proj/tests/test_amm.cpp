#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "mav/amm.hpp"
#include "mav/errors.hpp"
#include "mav/numeric.hpp"
#include "support.hpp"

using namespace mav;

TEST_CASE("spot price is the reserve ratio") {
    CHECK(spot_price({3000.0, 1.0}) == doctest::Approx(3000.0));
    CHECK(spot_price({1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(spot_price({2'000'000.0, 1000.0}) == doctest::Approx(2000.0));
    CHECK_THROWS_AS(spot_price({0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("execution rate") {
    const PoolState pool{100.0, 100.0};
    CHECK(execution_rate(pool, 100.0) == doctest::Approx(0.5));

    // Converges to spot for vanishing trades.
    const PoolState deep{3000.0, 1.0};
    CHECK(rel_diff(execution_rate(deep, 1e-12), 3000.0) < 1e-6);

    // Exact invariant arithmetic: dx = x - L/(y+dy).
    const PoolState big{2'000'000.0, 1000.0};
    const double dx = 2'000'000.0 - 2'000'000.0 * 1000.0 / 1010.0;
    CHECK(execution_rate(big, 10.0) == doctest::Approx(dx / 10.0).epsilon(1e-12));
    CHECK(execution_rate(big, 10.0) == doctest::Approx(1980.1980198019802).epsilon(1e-12));

    CHECK_THROWS_AS(execution_rate(pool, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(execution_rate(pool, -1.0), std::invalid_argument);
}

TEST_CASE("execution rate below spot and monotone decreasing") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const PoolState pool{testsup::log_uniform(rng, 1e2, 1e8),
                             testsup::log_uniform(rng, 1e0, 1e5)};
        const double spot = spot_price(pool);
        double prev = spot;
        for (double dy = 1e-6 * pool.reserve_y; dy < pool.reserve_y; dy *= 10.0) {
            const double er = execution_rate(pool, dy);
            CHECK(er < spot);
            CHECK(er < prev);
            prev = er;
        }
    }
}

TEST_CASE("cpmm price impact") {
    CHECK(price_impact_cpmm({100.0, 100.0}, 100.0) == doctest::Approx(0.5));
    CHECK(price_impact_cpmm({2'000'000.0, 1000.0}, 10.0) ==
          doctest::Approx(0.009900990099009901).epsilon(1e-12));
    CHECK(price_impact_cpmm({5000.0, 3.0}, 1e-9) < 1e-9);
    CHECK_THROWS_AS(price_impact_cpmm({100.0, 100.0}, 0.0), std::invalid_argument);
}

TEST_CASE("price impact equals output over quote reserve") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 500; ++i) {
        const PoolState pool{testsup::log_uniform(rng, 1.0, 1e9),
                             testsup::log_uniform(rng, 1.0, 1e6)};
        const double dy = testsup::log_uniform(rng, 1e-6, 2.0) * pool.reserve_y;
        const SwapResult res = apply_swap(pool, Side::sell_y, dy, false);
        CHECK(rel_diff(price_impact_cpmm(pool, dy), res.amount_out / pool.reserve_x) < 1e-12);
    }
}

TEST_CASE("apply_swap") {
    const PoolState pool{100.0, 100.0, 8.0};

    SUBCASE("fee-free sell-Y") {
        const SwapResult r = apply_swap(pool, Side::sell_y, 100.0, false);
        CHECK(r.amount_out == doctest::Approx(50.0));
        CHECK(r.new_state.reserve_x == doctest::Approx(50.0));
        CHECK(r.new_state.reserve_y == doctest::Approx(200.0));
        CHECK(rel_diff(r.new_state.invariant(), pool.invariant()) < 1e-12);
    }
    SUBCASE("fee-free sell-X mirrors") {
        const SwapResult r = apply_swap(pool, Side::sell_x, 100.0, false);
        CHECK(r.amount_out == doctest::Approx(50.0));
        CHECK(r.new_state.reserve_x == doctest::Approx(200.0));
        CHECK(r.new_state.reserve_y == doctest::Approx(50.0));
    }
    SUBCASE("8 bps fee deducted from input, invariant grows") {
        const SwapResult r = apply_swap(pool, Side::sell_y, 100.0, true);
        const double expect = 100.0 - 10000.0 / (100.0 + 99.92);
        CHECK(r.amount_out == doctest::Approx(expect).epsilon(1e-12));
        CHECK(r.amount_out < 50.0);
        CHECK(r.new_state.invariant() > pool.invariant());
    }
    SUBCASE("bad input") {
        CHECK_THROWS_AS(apply_swap(pool, Side::sell_y, 0.0, false), std::invalid_argument);
        CHECK_THROWS_AS(apply_swap(pool, Side::sell_y, -5.0, true), std::invalid_argument);
    }
}

TEST_CASE("fee-free swaps preserve the invariant over a million random trades") {
    std::mt19937_64 rng(13);
    std::size_t trades = 0;
    while (trades < 1'000'000) {
        PoolState pool{testsup::log_uniform(rng, 1e2, 1e8), testsup::log_uniform(rng, 1.0, 1e5)};
        const double l0 = pool.invariant();
        for (int i = 0; i < 100; ++i, ++trades) {
            const Side side = testsup::u01(rng) < 0.5 ? Side::sell_y : Side::sell_x;
            const double base = side == Side::sell_y ? pool.reserve_y : pool.reserve_x;
            const double amount = testsup::log_uniform(rng, 1e-6, 1.0) * base;
            pool = apply_swap(pool, side, amount, false).new_state;
            REQUIRE(rel_diff(pool.invariant(), l0) < 1e-9);
        }
    }
}

TEST_CASE("fee-free round trip restores the pool") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 1000; ++i) {
        const PoolState pool{testsup::log_uniform(rng, 1e2, 1e8),
                             testsup::log_uniform(rng, 1.0, 1e5)};
        const double dy = testsup::log_uniform(rng, 1e-5, 0.5) * pool.reserve_y;
        const SwapResult leg1 = apply_swap(pool, Side::sell_y, dy, false);
        const SwapResult leg2 = apply_swap(leg1.new_state, Side::sell_x, leg1.amount_out, false);
        CHECK(rel_diff(leg2.new_state.reserve_x, pool.reserve_x) < 1e-9);
        CHECK(rel_diff(leg2.new_state.reserve_y, pool.reserve_y) < 1e-9);
    }
}

TEST_CASE("tick prices") {
    CHECK(tick_price(0) == doctest::Approx(1.0));
    CHECK(tick_price(2) == doctest::Approx(1.00020001).epsilon(1e-12));
    CHECK(tick_price(-1) == doctest::Approx(1.0 / 1.0001).epsilon(1e-12));
    CHECK_THROWS_AS(tick_price(887273), std::domain_error);
    CHECK_THROWS_AS(tick_price(-887273), std::domain_error);

    for (int i : {-887271, -100000, -37, 0, 5, 12345, 600000, 887271}) {
        CHECK(rel_diff(tick_price(i + 1) / tick_price(i), 1.0001) < 1e-12);
    }
}

TEST_CASE("equivalent reserves") {
    TickRange r;
    r.alpha = 4.0;
    r.x_posted = 100.0;
    r.y_posted = 1.0;
    const auto [xe, ye] = equivalent_reserves(r);
    CHECK(xe == doctest::Approx(200.0));
    CHECK(ye == doctest::Approx(2.0));

    r.x_posted = 0.0;
    r.y_posted = 0.0;
    const auto [x0, y0] = equivalent_reserves(r);
    CHECK(x0 == 0.0);
    CHECK(y0 == 0.0);

    // Full-range liquidity behaves like a plain constant-product pool.
    r.x_posted = 100.0;
    r.y_posted = 1.0;
    r.alpha = 1e18;
    const auto [xf, yf] = equivalent_reserves(r);
    CHECK(rel_diff(xf, 100.0) < 1e-8);
    CHECK(rel_diff(yf, 1.0) < 1e-8);

    r.alpha = 1.0;
    CHECK_THROWS_AS(equivalent_reserves(r), std::domain_error);
}

TEST_CASE("TickRange::at_price reproduces posted reserves at the center") {
    const TickRange r = TickRange::at_price(0, 4.0, 100.0, 1.0, 100.0);
    CHECK(r.x_in_range == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(r.y_in_range == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.valid());
}

TEST_CASE("clmm price impact") {
    SUBCASE("vanishing trade") {
        const TickRange r = TickRange::at_price(0, 4.0, 100.0, 1.0, 100.0);
        CHECK(price_impact_clmm(r, 1e-12) < 1e-9);
    }
    SUBCASE("virtual-pool oracle at half the in-range budget") {
        const TickRange r = TickRange::at_price(0, 4.0, 100.0, 1.0, 100.0);
        const double dy = 0.5 * r.y_in_range;
        // Independent route: virtual reserves from the equivalent-reserve
        // formulas, then a plain constant-product swap.
        const double x_virt = r.x_in_range + r.x_posted / (std::sqrt(4.0) - 1.0);
        const double y_virt = r.y_in_range + r.y_posted / (std::sqrt(4.0) - 1.0);
        const double dx = x_virt * dy / (y_virt + dy);
        CHECK(rel_diff(price_impact_clmm(r, dy), dx / x_virt) < 1e-9);
        CHECK(price_impact_clmm(r, dy) == doctest::Approx(0.2));
    }
    SUBCASE("degenerates to cpmm for huge alpha") {
        const double x = 5000.0;
        const double y = 2.5;
        TickRange r;
        r.alpha = 1e14;
        r.x_posted = x;
        r.y_posted = y;
        r.x_in_range = x;
        r.y_in_range = y;
        const double dy = 0.3 * y;
        CHECK(rel_diff(price_impact_clmm(r, dy), price_impact_cpmm({x, y}, dy)) < 1e-6);
    }
    SUBCASE("alpha 1e8 within 1e-4 of cpmm") {
        const double x = 777.0;
        const double y = 3.2;
        TickRange r;
        r.alpha = 1e8;
        r.x_posted = x;
        r.y_posted = y;
        r.x_in_range = x;
        r.y_in_range = y;
        const double dy = 0.8 * y;
        CHECK(rel_diff(price_impact_clmm(r, dy), price_impact_cpmm({x, y}, dy)) < 1e-4);
    }
    SUBCASE("tick exhaustion carries the budget") {
        const TickRange r = TickRange::at_price(0, 4.0, 100.0, 1.0, 100.0);
        try {
            price_impact_clmm(r, 2.0 * r.y_in_range);
            FAIL("expected TickExhausted");
        } catch (const TickExhausted& e) {
            CHECK(e.max_dy == doctest::Approx(r.y_in_range));
        }
    }
}

TEST_CASE("ticked pool validation") {
    TickedPool pool;
    const double alpha = std::sqrt(1.0001);
    // Three contiguous ranges centered so bounds tile exactly.
    for (int i = 0; i < 3; ++i) {
        const double center = 2000.0 * std::pow(1.0001, i);
        pool.ranges.push_back(TickRange::at_price(i, alpha, center * 10.0, 10.0, center));
    }
    pool.current_tick = 1;
    pool.spot = pool.ranges[1].center_price();
    CHECK_NOTHROW(pool.validate());

    SUBCASE("spot outside current tick") {
        pool.spot = pool.ranges[1].upper_price() * 1.1;
        CHECK_THROWS_AS(pool.validate(), std::invalid_argument);
    }
    SUBCASE("non-contiguous indices") {
        pool.ranges[2].tick_index = 5;
        CHECK_THROWS_AS(pool.validate(), std::invalid_argument);
    }
    SUBCASE("mirrored pool is valid and inverts prices") {
        const TickedPool m = pool.mirrored();
        CHECK_NOTHROW(m.validate());
        CHECK(m.spot == doctest::Approx(1.0 / pool.spot));
        CHECK(m.current_tick == -2);
    }
}
