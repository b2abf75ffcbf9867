#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mav/amm.hpp"

namespace mav {

enum class ArbDirection { none, sell_on_amm, buy_on_amm };

const char* to_string(ArbDirection d);

// Optimal arbitrage volume and gross profit for one AMM/CEX price divergence.
// v_max is expressed in token-Y units (for buy-on-AMM it is the Y-equivalent
// of the X volume at the AMM spot, so v_max * p_amm is the AMM-leg notional in
// quote units either way); mav is in token-X (quote) units.
struct MavResult {
    double v_max = 0.0;
    double mav = 0.0;
    ArbDirection direction = ArbDirection::none;
    double p_amm = 0.0;
    double p_cex = 0.0;
};

/// Volume that maximises arbitrage profit when selling Y on the AMM:
/// y * (P_a - P_c) / (2 P_a). Requires spot >= p_cex.
double v_max_cpmm(const PoolState& pool, double p_cex);

/// Closed-form maximal arbitrage value y * (P_a - P_c)^2 / (4 P_a). When the
/// CEX price is above the AMM price the same formula is applied in inverse
/// price space (selling X) and converted to quote units at p_cex.
MavResult mav_cpmm(const PoolState& pool, double p_cex);

/// Grid-search oracle over the arbitrage value objective
/// V*(P_a - P_c) - V^2*P_a/y on (0, 2y]: a geometric sweep followed by a
/// linear refinement around the best point. Test/--verify use only.
MavResult mav_bruteforce(const PoolState& pool, double p_cex, std::size_t grid_points);

struct TickWalkEntry {
    int tick_index = 0;
    double volume = 0.0;  // traded within this tick, in the sold token's units
    double mav = 0.0;     // quote-unit profit contributed by this tick
};

struct TickWalkTrace {
    std::vector<TickWalkEntry> entries;
    double total_volume = 0.0;
    double total_mav = 0.0;
    bool liquidity_exhausted = false;
};

/// Tick-walk arbitrage value on a concentrated-liquidity pool: from the tick
/// holding the AMM price toward the tick holding the CEX price, taking in each
/// tick the unconstrained optimum on that tick's virtual constant-product pool
/// clipped at the tick boundary volume, and summing per-tick profits. Running
/// out of ranges before realignment yields a partial result with
/// liquidity_exhausted set.
std::pair<MavResult, TickWalkTrace> mav_clmm(const TickedPool& pool, double p_cex);

}  // namespace mav
