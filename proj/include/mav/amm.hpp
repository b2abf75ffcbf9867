#pragma once

#include <utility>
#include <vector>

namespace mav {

// Two-token constant-product pool. reserve_x is the quote token (prices are
// X per Y), reserve_y the base token. The pool invariant is reserve_x * reserve_y.
struct PoolState {
    double reserve_x = 0.0;
    double reserve_y = 0.0;
    double fee_bps = 0.0;

    double invariant() const { return reserve_x * reserve_y; }
    bool valid() const {
        return reserve_x > 0.0 && reserve_y > 0.0 && fee_bps >= 0.0;
    }
};

enum class Side { sell_y, sell_x };

struct SwapResult {
    double amount_in = 0.0;
    double amount_out = 0.0;
    double execution_rate = 0.0;  // output token per unit of input token
    double price_impact = 0.0;    // 1 - execution_rate / pre-trade spot, >= 0
    PoolState new_state;
};

/// Instantaneous exchange rate reserve_x / reserve_y.
double spot_price(const PoolState& pool);

/// Average rate obtained when selling dy of token Y, x/(y+dy). Always below
/// spot and converging to it as dy -> 0.
double execution_rate(const PoolState& pool, double dy);

/// Percentage price impact of selling dy: the output amount divided by the
/// pre-trade quote reserve, dy/(y+dy). Non-negative.
double price_impact_cpmm(const PoolState& pool, double dy);

/// Executes a swap and returns the new pool state. With apply_fee the fee
/// fraction of the input is deducted before the invariant trade while the
/// full input is added to reserves, so the invariant weakly increases.
SwapResult apply_swap(const PoolState& pool, Side side, double amount_in, bool apply_fee);

inline constexpr int kMaxTickIndex = 887272;

/// Tick grid price 1.0001^i for |i| <= kMaxTickIndex.
double tick_price(int i);

// One concentrated-liquidity range. Posted reserves (x_posted, y_posted) are
// the amounts supplied at the range's center price x_posted/y_posted; the
// range spans [center/alpha, center*alpha] with alpha > 1. x_in_range and
// y_in_range are the current real reserves, which drift within the range as
// the price moves.
struct TickRange {
    int tick_index = 0;
    double alpha = 0.0;
    double x_posted = 0.0;
    double y_posted = 0.0;
    double x_in_range = 0.0;
    double y_in_range = 0.0;

    double center_price() const { return x_posted / y_posted; }
    double lower_price() const { return center_price() / alpha; }
    double upper_price() const { return center_price() * alpha; }

    // Virtual reserves of the equivalent full-range pool at the current
    // in-range state; in-tick trading is constant-product on these.
    double virtual_x() const;
    double virtual_y() const;
    // Price-independent virtual product (the equivalent pool's invariant).
    double virtual_product() const;

    bool valid() const;

    /// Range with in-range reserves consistent with the given price
    /// (clamped to the range bounds).
    static TickRange at_price(int tick_index, double alpha, double x_posted,
                              double y_posted, double price);
};

/// Equivalent full-range reserves x_i/(1-1/sqrt(alpha)), y_i/(1-1/sqrt(alpha)).
std::pair<double, double> equivalent_reserves(const TickRange& range);

/// Percentage price impact of selling dy within the range: dy must not exceed
/// the range's y_in_range budget, else TickExhausted carries the maximum.
double price_impact_clmm(const TickRange& range, double dy);

// A concentrated-liquidity pool as a contiguous ladder of ranges. Ranges are
// sorted ascending by tick_index and must tile in price: each range's upper
// bound is the next range's lower bound.
struct TickedPool {
    std::vector<TickRange> ranges;
    int current_tick = 0;
    double spot = 0.0;

    const TickRange* find(int tick_index) const;
    void validate() const;  // throws std::invalid_argument on violation

    // Same pool with X and Y roles exchanged and prices inverted; tick i maps
    // to -i-1 so that ordering and contiguity are preserved.
    TickedPool mirrored() const;
};

}  // namespace mav
