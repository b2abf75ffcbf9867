#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "clmm_oracle.hpp"
#include "mav/amm.hpp"
#include "mav/numeric.hpp"
#include "mav/solver.hpp"
#include "support.hpp"

using namespace mav;

namespace {

// Independent statement of the arbitrage-value objective for derivative and
// concavity checks.
double objective(double v, double p_a, double p_c, double y) {
    return v * (p_a - p_c) - v * v * p_a / y;
}

TickedPool three_tick_pool(double base_center, double depth_y, double spot_ticks_up) {
    TickedPool pool;
    const double alpha = std::sqrt(1.0001);
    for (int i = 0; i < 3; ++i) {
        const double center = base_center * std::pow(1.0001, i);
        pool.ranges.push_back(
            TickRange::at_price(i, alpha, center * depth_y, depth_y, center));
    }
    pool.current_tick = 2;
    pool.spot = pool.ranges[2].center_price() * std::pow(1.0001, spot_ticks_up);
    return pool;
}

}  // namespace

TEST_CASE("v_max closed form") {
    CHECK(v_max_cpmm({200'000.0, 100.0}, 1900.0) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(v_max_cpmm({200'000.0, 100.0}, 2000.0) == doctest::Approx(0.0));
    CHECK(v_max_cpmm({100.0, 100.0}, 0.5) == doctest::Approx(25.0).epsilon(1e-15));
    CHECK_THROWS_AS(v_max_cpmm({100.0, 100.0}, 0.0), std::domain_error);
    CHECK_THROWS_AS(v_max_cpmm({100.0, 100.0}, 2.0), std::invalid_argument);
}

TEST_CASE("mav closed form, canonical direction") {
    const MavResult r = mav_cpmm({200'000.0, 100.0}, 1900.0);
    CHECK(r.mav == doctest::Approx(125.0).epsilon(1e-15));
    CHECK(r.v_max == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(r.direction == ArbDirection::sell_on_amm);

    const MavResult zero = mav_cpmm({200'000.0, 100.0}, 2000.0);
    CHECK(zero.mav == 0.0);
    CHECK(zero.v_max == 0.0);
    CHECK(zero.direction == ArbDirection::none);
}

TEST_CASE("mav reverse direction matches the grid oracle") {
    const PoolState pool{100.0, 100.0};
    const MavResult closed = mav_cpmm(pool, 2.0);
    CHECK(closed.direction == ArbDirection::buy_on_amm);
    const MavResult grid = mav_bruteforce(pool, 2.0, 1'000'000);
    CHECK(rel_diff(closed.mav, grid.mav) < 1e-6);
}

TEST_CASE("grid oracle") {
    const MavResult r = mav_bruteforce({200'000.0, 100.0}, 1900.0, 1'000'000);
    CHECK(rel_diff(r.mav, 125.0) < 1e-6);
    CHECK(mav_bruteforce({200'000.0, 100.0}, 2000.0, 1000).mav == 0.0);
    CHECK_THROWS_AS(mav_bruteforce({1.0, 1.0}, 1.5, 999), std::invalid_argument);
}

TEST_CASE("closed form agrees with the grid oracle on random pools") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        const double y = testsup::log_uniform(rng, 1.0, 1e4);
        const double p_a = testsup::log_uniform(rng, 0.1, 1e4);
        const PoolState pool{p_a * y, y};
        double f = testsup::uniform(rng, 0.80, 1.25);
        if (std::abs(f - 1.0) < 1e-3) f = 1.05;
        const double p_c = p_a * f;
        const MavResult closed = mav_cpmm(pool, p_c);
        const MavResult grid = mav_bruteforce(pool, p_c, 1'000'000);
        CHECK(rel_diff(closed.mav, grid.mav) < 1e-5);
        CHECK(rel_diff(closed.v_max, grid.v_max) < 1e-5);
    }
}

TEST_CASE("first-order condition and concavity at the optimum") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 200; ++i) {
        const double y = testsup::log_uniform(rng, 1.0, 1e4);
        const double p_a = testsup::log_uniform(rng, 1.0, 5e3);
        const double p_c = p_a * testsup::uniform(rng, 0.7, 0.999);
        const PoolState pool{p_a * y, y};
        const double v = v_max_cpmm(pool, p_c);
        const double h = 1e-6 * v;
        const double deriv =
            (objective(v + h, p_a, p_c, y) - objective(v - h, p_a, p_c, y)) / (2.0 * h);
        CHECK(std::abs(deriv) / (p_a - p_c) < 1e-6);
        const double at_opt = objective(v, p_a, p_c, y);
        CHECK(objective(1.1 * v, p_a, p_c, y) < at_opt);
        CHECK(objective(0.9 * v, p_a, p_c, y) < at_opt);
    }
}

TEST_CASE("direction relabeling with exact price inversion") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 300; ++i) {
        const double y = testsup::log_uniform(rng, 1.0, 1e4);
        const double p_a = testsup::log_uniform(rng, 0.5, 5e3);
        const double p_c = p_a * testsup::uniform(rng, 0.8, 0.99);
        const PoolState pool{p_a * y, y};
        const MavResult direct = mav_cpmm(pool, p_c);
        // Mirrored pool quoted in Y: same opportunity seen from the other side.
        const PoolState mirrored{pool.reserve_y, pool.reserve_x};
        const MavResult inverse = mav_cpmm(mirrored, 1.0 / p_c);
        CHECK(rel_diff(direct.mav, inverse.mav * p_c) < 1e-9);
    }
}

TEST_CASE("mav scales linearly in pool depth") {
    const PoolState pool{200'000.0, 100.0};
    const PoolState doubled{400'000.0, 200.0};
    CHECK(mav_cpmm(doubled, 1900.0).mav == 2.0 * mav_cpmm(pool, 1900.0).mav);
    CHECK(mav_cpmm(doubled, 1900.0).v_max == 2.0 * mav_cpmm(pool, 1900.0).v_max);
}

TEST_CASE("single-tick clmm equals cpmm on the virtual reserves") {
    TickedPool pool;
    pool.ranges.push_back(TickRange::at_price(0, 1e8, 2'000'000.0, 1000.0, 2000.0));
    pool.current_tick = 0;
    pool.spot = 2000.0;

    const auto [res, trace] = mav_clmm(pool, 1900.0);
    REQUIRE(trace.entries.size() == 1);
    CHECK_FALSE(trace.liquidity_exhausted);

    const TickRange& r = pool.ranges[0];
    const PoolState virt{r.virtual_x(), r.virtual_y()};
    const MavResult flat = mav_cpmm(virt, 1900.0);
    CHECK(rel_diff(res.mav, flat.mav) < 1e-6);
    CHECK(rel_diff(res.v_max, flat.v_max) < 1e-6);
}

TEST_CASE("cex price inside the current tick gives a single walk entry") {
    const TickedPool pool = three_tick_pool(2000.0, 50'000.0, 0.3);
    const double p_c = pool.ranges[2].center_price() * std::pow(1.0001, 0.1);
    REQUIRE(p_c < pool.spot);
    REQUIRE(p_c > pool.ranges[2].lower_price());
    const auto [res, trace] = mav_clmm(pool, p_c);
    CHECK(trace.entries.size() == 1);
    CHECK(res.mav > 0.0);
}

TEST_CASE("three-tick walk matches the fine-step simulation") {
    const TickedPool pool = three_tick_pool(2000.0, 50'000.0, 0.35);
    // Two tick crossings down into the bottom range.
    const double p_c = pool.ranges[0].center_price();
    const auto [res, trace] = mav_clmm(pool, p_c);
    CHECK(trace.entries.size() == 3);
    CHECK_FALSE(trace.liquidity_exhausted);

    const testsup::FineStepResult sim = testsup::fine_step_mav(pool, p_c, 1e-6);
    CHECK(rel_diff(res.mav, sim.best_profit) < 1e-3);

    double sum = 0.0;
    for (const auto& e : trace.entries) sum += e.mav;
    CHECK(rel_diff(sum, trace.total_mav) < 1e-9);
}

TEST_CASE("walk volumes land the price on the cex price within one tick") {
    const TickedPool pool = three_tick_pool(1850.0, 20'000.0, 0.4);
    const double p_c = pool.ranges[0].center_price() * std::pow(1.0001, 0.2);
    const auto [res, trace] = mav_clmm(pool, p_c);
    REQUIRE_FALSE(trace.liquidity_exhausted);

    // Replay the traced volumes tick by tick on the virtual pools.
    double price = pool.spot;
    for (const auto& e : trace.entries) {
        const TickRange* rg = pool.find(e.tick_index);
        REQUIRE(rg != nullptr);
        const double k = rg->virtual_product();
        const double y_v = std::sqrt(k / price);
        const double y_after = y_v + e.volume;
        price = k / (y_after * y_after);
    }
    const double tick_width = pool.ranges[0].upper_price() - pool.ranges[0].lower_price();
    CHECK(std::abs(price - p_c) <= tick_width);
}

TEST_CASE("walk total is monotone in the divergence") {
    const TickedPool pool = three_tick_pool(2000.0, 50'000.0, 0.4);
    double prev = 0.0;
    for (double f = 0.99995; f > 0.9996; f -= 0.00005) {
        const auto [res, trace] = mav_clmm(pool, pool.spot * f);
        CHECK(res.mav >= prev);
        prev = res.mav;
    }
}

TEST_CASE("running out of ranges flags liquidity exhaustion") {
    const TickedPool pool = three_tick_pool(2000.0, 50'000.0, 0.4);
    const double p_c = pool.ranges[0].lower_price() * 0.98;  // below all liquidity
    const auto [res, trace] = mav_clmm(pool, p_c);
    CHECK(trace.liquidity_exhausted);
    CHECK(res.mav > 0.0);
    CHECK(trace.entries.size() == 3);
}

TEST_CASE("buy direction walk matches the fine-step simulation on the mirror") {
    const TickedPool pool = three_tick_pool(2000.0, 50'000.0, 0.35);
    const double p_c = pool.spot * 1.0002;  // CEX above AMM: buy on the AMM
    const auto [res, trace] = mav_clmm(pool, p_c);
    CHECK(res.direction == ArbDirection::buy_on_amm);

    const testsup::FineStepResult sim =
        testsup::fine_step_mav(pool.mirrored(), 1.0 / p_c, 1e-6);
    CHECK(rel_diff(res.mav, sim.best_profit * p_c) < 1e-3);
}
