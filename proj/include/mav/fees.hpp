#pragma once

#include <cstdint>
#include <vector>

#include "mav/market_data.hpp"
#include "mav/solver.hpp"

namespace mav {

// Arbitrage execution cost split: gas (L1 + L2), LP fee, and the implicit
// block-slippage component. All values in quote-token units.
struct FeeBreakdown {
    double l1_fee = 0.0;
    double l2_fee = 0.0;
    double lp_fee = 0.0;
    double block_slippage = 0.0;
    double total = 0.0;
};

FeeBreakdown make_fee_breakdown(double l1, double l2, double lp, double slippage);

/// LP trading fee on a quote-unit volume: volume * fee_bps / 10000.
double lp_fee(double volume, double fee_bps);

/// Arbitrage value net of the deterministic LP fee on the AMM-leg notional
/// (v_max * p_amm). May come out negative; callers filter such rows.
double clean_mav(const MavResult& result, double fee_bps);

/// Per-event signed slippage within a block: realized proceeds minus the
/// proceeds the same input would have obtained at the block's opening
/// reserves, in quote units (base-token proceeds valued at the opening spot).
/// The first event in a block has zero slippage by definition.
std::vector<double> block_slippage(const BlockGroup& block, double fee_bps = 0.0);

struct GasWindow {
    double value = 0.0;
    bool stale = false;  // set when carried from an earlier nonempty window
};

/// Mean gas fee of swaps in [end_minute-60, end_minute). An empty window
/// carries the most recent nonempty window's mean and flags it stale; no prior
/// swaps at all raises DataError.
GasWindow avg_gas_window(const std::vector<SwapEvent>& swaps, int64_t end_minute);

struct VolumeWindow {
    double value = 0.0;
    bool stale = false;
};

/// Total quote volume in [end_minute-60, end_minute) with the same
/// stale-carry rule as avg_gas_window.
VolumeWindow prev_minute_volume(const std::vector<SwapEvent>& swaps, int64_t end_minute);

}  // namespace mav
