#include "mav/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mav/errors.hpp"

namespace mav {

namespace {

void require_price(double p_cex) {
    if (!(p_cex > 0.0)) throw std::domain_error("CEX price must be positive");
}

// Arbitrage value of selling volume v of the base token against a pool with
// base reserve y and spot p_a, settled at p_c with no CEX impact.
inline double arb_value(double v, double p_a, double p_c, double y) {
    return v * (p_a - p_c) - v * v * p_a / y;
}

struct GridBest {
    double volume = 0.0;
    double value = 0.0;
};

// Canonical-direction grid search (p_a > p_c, selling base reserve y).
GridBest grid_search(double p_a, double p_c, double y, std::size_t n) {
    GridBest best;
    const double v_hi = 2.0 * y;
    const double v_lo = v_hi * 1e-12;

    // Geometric sweep catches optima at any scale.
    const std::size_t n1 = n / 2;
    const double ratio = std::pow(v_hi / v_lo, 1.0 / static_cast<double>(n1 - 1));
    double v = v_lo;
    for (std::size_t i = 0; i < n1; ++i) {
        const double f = arb_value(v, p_a, p_c, y);
        if (f > best.value) best = {v, f};
        v *= ratio;
    }

    // Linear refinement around the geometric best.
    const std::size_t n2 = n - n1;
    const double lo = std::max(v_lo, best.volume / 1.5);
    const double hi = std::min(v_hi, best.volume * 1.5);
    const double step = (hi - lo) / static_cast<double>(n2 - 1);
    for (std::size_t i = 0; i < n2; ++i) {
        const double vi = lo + step * static_cast<double>(i);
        const double f = arb_value(vi, p_a, p_c, y);
        if (f > best.value) best = {vi, f};
    }
    return best;
}

}  // namespace

const char* to_string(ArbDirection d) {
    switch (d) {
        case ArbDirection::sell_on_amm: return "sell-on-amm";
        case ArbDirection::buy_on_amm: return "buy-on-amm";
        default: return "none";
    }
}

double v_max_cpmm(const PoolState& pool, double p_cex) {
    require_price(p_cex);
    const double p_a = spot_price(pool);
    if (p_a < p_cex) {
        throw std::invalid_argument("v_max_cpmm expects spot >= CEX price; use mav_cpmm for the reverse direction");
    }
    return pool.reserve_y * (p_a - p_cex) / (2.0 * p_a);
}

MavResult mav_cpmm(const PoolState& pool, double p_cex) {
    require_price(p_cex);
    const double p_a = spot_price(pool);

    MavResult res;
    res.p_amm = p_a;
    res.p_cex = p_cex;
    if (p_a == p_cex) return res;

    if (p_a > p_cex) {
        res.direction = ArbDirection::sell_on_amm;
        res.v_max = v_max_cpmm(pool, p_cex);
        res.mav = pool.reserve_y * (p_a - p_cex) * (p_a - p_cex) / (4.0 * p_a);
    } else {
        // Same closed form in inverse-price space: sell X against the Y
        // reserve, profit in Y units, then convert to quote at the CEX price.
        const double pa_inv = 1.0 / p_a;
        const double pc_inv = 1.0 / p_cex;
        const double v_x = pool.reserve_x * (pa_inv - pc_inv) / (2.0 * pa_inv);
        const double mav_y = pool.reserve_x * (pa_inv - pc_inv) * (pa_inv - pc_inv) / (4.0 * pa_inv);
        res.direction = ArbDirection::buy_on_amm;
        res.v_max = v_x * pa_inv;  // Y-equivalent at the AMM spot
        res.mav = mav_y * p_cex;
    }
    return res;
}

MavResult mav_bruteforce(const PoolState& pool, double p_cex, std::size_t grid_points) {
    require_price(p_cex);
    if (grid_points < 1000) throw std::invalid_argument("grid_points must be at least 1000");
    const double p_a = spot_price(pool);

    MavResult res;
    res.p_amm = p_a;
    res.p_cex = p_cex;
    if (p_a == p_cex) return res;

    if (p_a > p_cex) {
        const GridBest best = grid_search(p_a, p_cex, pool.reserve_y, grid_points);
        res.direction = ArbDirection::sell_on_amm;
        res.v_max = best.volume;
        res.mav = best.value;
    } else {
        const double pa_inv = 1.0 / p_a;
        const double pc_inv = 1.0 / p_cex;
        const GridBest best = grid_search(pa_inv, pc_inv, pool.reserve_x, grid_points);
        res.direction = ArbDirection::buy_on_amm;
        res.v_max = best.volume * pa_inv;
        res.mav = best.value * p_cex;
    }
    return res;
}

namespace {

// Walk in the falling-price direction (selling base) until the per-tick
// optimum fits inside a tick or liquidity runs out.
TickWalkTrace walk_down(const TickedPool& pool, double p_c) {
    TickWalkTrace trace;

    std::size_t idx = 0;
    for (std::size_t i = 0; i < pool.ranges.size(); ++i) {
        if (pool.ranges[i].tick_index == pool.current_tick) {
            idx = i;
            break;
        }
    }

    double p_in = pool.spot;
    for (std::size_t i = idx;; --i) {
        const TickRange& rg = pool.ranges[i];
        if (p_in <= p_c) break;

        const double k = rg.virtual_product();
        const double p_l = rg.lower_price();
        const double y_v = std::sqrt(k / p_in);
        const double v_unc = y_v * (p_in - p_c) / (2.0 * p_in);
        const double cap = std::sqrt(k / p_l) - y_v;

        if (v_unc <= cap) {
            if (v_unc > 0.0) {
                const double gain = arb_value(v_unc, p_in, p_c, y_v);
                trace.entries.push_back({rg.tick_index, v_unc, gain});
                trace.total_volume += v_unc;
                trace.total_mav += gain;
            }
            break;
        }

        if (cap > 0.0) {
            const double gain = arb_value(cap, p_in, p_c, y_v);
            trace.entries.push_back({rg.tick_index, cap, gain});
            trace.total_volume += cap;
            trace.total_mav += gain;
        }
        p_in = p_l;
        if (i == 0) {
            trace.liquidity_exhausted = true;
            break;
        }
    }
    return trace;
}

}  // namespace

std::pair<MavResult, TickWalkTrace> mav_clmm(const TickedPool& pool, double p_cex) {
    require_price(p_cex);
    pool.validate();

    MavResult res;
    res.p_amm = pool.spot;
    res.p_cex = p_cex;
    TickWalkTrace trace;
    if (pool.spot == p_cex) return {res, trace};

    if (pool.spot > p_cex) {
        trace = walk_down(pool, p_cex);
        res.direction = ArbDirection::sell_on_amm;
        res.v_max = trace.total_volume;
        res.mav = trace.total_mav;
    } else {
        // Mirror, walk the canonical direction, then convert profits (Y units
        // on the mirrored pool) back to quote at the CEX price. Trace volumes
        // stay in the traded token's units (X here).
        const TickedPool m = pool.mirrored();
        TickWalkTrace mt = walk_down(m, 1.0 / p_cex);
        trace.liquidity_exhausted = mt.liquidity_exhausted;
        for (const auto& e : mt.entries) {
            trace.entries.push_back({-e.tick_index - 1, e.volume, e.mav * p_cex});
            trace.total_volume += e.volume;
            trace.total_mav += e.mav * p_cex;
        }
        res.direction = ArbDirection::buy_on_amm;
        res.v_max = mt.total_volume / pool.spot;  // Y-equivalent at the AMM spot
        res.mav = trace.total_mav;
    }
    return {res, trace};
}

}  // namespace mav
