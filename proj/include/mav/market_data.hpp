#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mav {

// One swap log entry. Reserves are the pool balances immediately before the
// swap; exactly one of amount_x_in / amount_y_in is positive. Events order
// globally by (block_number, tx_index, log_index).
struct SwapEvent {
    int64_t timestamp = 0;
    int64_t block_number = 0;
    int32_t tx_index = 0;
    int32_t log_index = 0;
    double amount_x_in = 0.0;
    double amount_x_out = 0.0;
    double amount_y_in = 0.0;
    double amount_y_out = 0.0;
    double reserve_x_before = 0.0;
    double reserve_y_before = 0.0;
    double gas_fee = 0.0;
    std::optional<double> l1_fee;
    std::optional<double> l2_fee;

    double reserve_x_after() const { return reserve_x_before + amount_x_in - amount_x_out; }
    double reserve_y_after() const { return reserve_y_before + amount_y_in - amount_y_out; }
    double quote_volume() const { return amount_x_in + amount_x_out; }
};

enum class SwapSchema { csv, jsonl };

struct SwapLoad {
    std::vector<SwapEvent> events;
    std::size_t reordered_rows = 0;  // rows that were out of canonical order on input
};

/// Loads swap events, validates per-row invariants, and returns them sorted by
/// (block_number, tx_index, log_index). Out-of-order input is sorted and
/// counted; duplicate keys and malformed rows raise DataError naming the row.
/// quote_is_x=false swaps the X/Y roles of the file's columns on load.
SwapLoad load_swaps(const std::string& path, SwapSchema schema, bool quote_is_x = true);

/// Canonical CSV writer; loading its output and writing again is a byte-level
/// fixed point.
void write_swaps_csv(const std::string& path, const std::vector<SwapEvent>& events);

struct CexBar {
    int64_t open_time = 0;  // unix seconds, minute aligned
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;
};

/// Minute klines from CSV (open_time,open,high,low,close,volume). Times must
/// be minute aligned and strictly increasing; gaps are kept, not filled.
std::vector<CexBar> load_cex_bars(const std::string& path);

void write_cex_csv(const std::string& path, const std::vector<CexBar>& bars);

// One minute of the joined series: CEX close vs AMM state after the minute's
// last swap. Minutes without swaps carry the previous AMM state forward with
// traded=false.
struct AlignedMinute {
    int64_t minute = 0;
    double cex_close = 0.0;
    double amm_spot = 0.0;
    double reserve_x = 0.0;
    double reserve_y = 0.0;
    double amm_volume = 0.0;  // quote units traded this minute
    double avg_gas = 0.0;     // mean gas fee per swap this minute
    int swap_count = 0;
    bool traded = false;
};

/// Joins swaps and bars over their overlapping minute range; one record per
/// minute of the intersection. Empty overlap raises DataError.
std::vector<AlignedMinute> align_minutes(const std::vector<SwapEvent>& swaps,
                                         const std::vector<CexBar>& bars);

struct BlockGroup {
    int64_t block_number = 0;
    std::vector<SwapEvent> events;  // intra-block order preserved
};

std::vector<BlockGroup> block_groups(const std::vector<SwapEvent>& swaps);

}  // namespace mav
