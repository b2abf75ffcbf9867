#include "mav/fees.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mav/amm.hpp"
#include "mav/errors.hpp"

namespace mav {

FeeBreakdown make_fee_breakdown(double l1, double l2, double lp, double slippage) {
    FeeBreakdown b;
    b.l1_fee = l1;
    b.l2_fee = l2;
    b.lp_fee = lp;
    b.block_slippage = slippage;
    b.total = l1 + l2 + lp + slippage;
    return b;
}

double lp_fee(double volume, double fee_bps) {
    if (volume < 0.0) throw std::domain_error("lp_fee volume must be non-negative");
    if (fee_bps < 0.0) throw std::domain_error("fee_bps must be non-negative");
    return volume * fee_bps / 10000.0;
}

double clean_mav(const MavResult& result, double fee_bps) {
    return result.mav - lp_fee(result.v_max * result.p_amm, fee_bps);
}

std::vector<double> block_slippage(const BlockGroup& block, double fee_bps) {
    std::vector<double> out(block.events.size(), 0.0);
    if (block.events.size() < 2) return out;

    const SwapEvent& first = block.events.front();
    PoolState open{first.reserve_x_before, first.reserve_y_before, fee_bps};
    const double open_spot = open.reserve_x / open.reserve_y;

    for (std::size_t i = 1; i < block.events.size(); ++i) {
        const SwapEvent& e = block.events[i];
        if (e.amount_y_in > 0.0) {
            // Sold Y, realized X out.
            const SwapResult cf = apply_swap(open, Side::sell_y, e.amount_y_in, fee_bps > 0.0);
            out[i] = e.amount_x_out - cf.amount_out;
        } else {
            // Sold X, realized Y out; value the difference at the opening spot.
            const SwapResult cf = apply_swap(open, Side::sell_x, e.amount_x_in, fee_bps > 0.0);
            out[i] = (e.amount_y_out - cf.amount_out) * open_spot;
        }
    }
    return out;
}

namespace {

struct MinuteScan {
    double sum_gas = 0.0;
    double sum_volume = 0.0;
    std::size_t count = 0;
};

MinuteScan scan_window(const std::vector<SwapEvent>& swaps, int64_t lo, int64_t hi) {
    MinuteScan s;
    for (const auto& e : swaps) {
        if (e.timestamp >= lo && e.timestamp < hi) {
            s.sum_gas += e.gas_fee;
            s.sum_volume += e.quote_volume();
            ++s.count;
        }
    }
    return s;
}

int64_t earliest_timestamp(const std::vector<SwapEvent>& swaps) {
    int64_t lo = swaps.front().timestamp;
    for (const auto& e : swaps) lo = std::min(lo, e.timestamp);
    return lo;
}

}  // namespace

GasWindow avg_gas_window(const std::vector<SwapEvent>& swaps, int64_t end_minute) {
    if (swaps.empty()) throw DataError("avg_gas_window: no swap data");
    const int64_t first = earliest_timestamp(swaps);
    if (end_minute - 60 < first - 60) {
        throw DataError("avg_gas_window: no data before minute " + std::to_string(end_minute));
    }
    GasWindow g;
    for (int64_t hi = end_minute; hi - 60 >= first - 60; hi -= 60) {
        const MinuteScan s = scan_window(swaps, hi - 60, hi);
        if (s.count > 0) {
            g.value = s.sum_gas / static_cast<double>(s.count);
            g.stale = hi != end_minute;
            return g;
        }
    }
    throw DataError("avg_gas_window: no swaps at or before minute " + std::to_string(end_minute));
}

VolumeWindow prev_minute_volume(const std::vector<SwapEvent>& swaps, int64_t end_minute) {
    if (swaps.empty()) throw DataError("prev_minute_volume: no swap data");
    const int64_t first = earliest_timestamp(swaps);
    VolumeWindow v;
    for (int64_t hi = end_minute; hi - 60 >= first - 60; hi -= 60) {
        const MinuteScan s = scan_window(swaps, hi - 60, hi);
        if (s.count > 0 && s.sum_volume > 0.0) {
            v.value = s.sum_volume;
            v.stale = hi != end_minute;
            return v;
        }
    }
    throw DataError("prev_minute_volume: no traded volume at or before minute " +
                    std::to_string(end_minute));
}

}  // namespace mav
