#pragma once

#include <cstdint>
#include <vector>

#include "mav/market_data.hpp"
#include "mav/solver.hpp"

namespace mav {

struct DeltaPoint {
    int64_t minute = 0;
    double delta = 0.0;           // amm_spot - cex_close
    double abs_delta = 0.0;
    double relative_delta = 0.0;  // delta / cex_close
};

struct DeltaSeries {
    std::vector<DeltaPoint> points;
};

DeltaSeries build_delta_series(const std::vector<AlignedMinute>& aligned);

/// Q3 + 1.5*IQR of the absolute deltas, quartiles by type-7 linear
/// interpolation. Needs at least 4 points.
double outlier_threshold(const DeltaSeries& deltas);

/// Per-minute trailing-window variant of outlier_threshold. Minutes with
/// fewer than 4 points of history get an infinite threshold (no detection).
std::vector<double> rolling_outlier_threshold(const DeltaSeries& deltas, std::size_t window);

// A maximal run of minutes with |delta| above threshold. end_minute is the
// first minute back at or below the threshold; an episode still open when the
// series ends is unresolved and has no decay time.
struct MisalignmentEpisode {
    int64_t start_minute = 0;
    int64_t end_minute = 0;
    int64_t peak_minute = 0;
    double peak_abs_delta = 0.0;
    MavResult peak_mav;
    int64_t decay_seconds = 0;
    bool resolved = false;
    std::vector<AlignedMinute> minutes;  // the above-threshold slice
};

/// Segments the series into episodes. Within each run the saved value is the
/// maximum per-minute closed-form arbitrage value (one value per episode, so
/// an evolving misalignment is never double counted); ties resolve to the
/// earliest minute.
std::vector<MisalignmentEpisode> segment_episodes(const std::vector<AlignedMinute>& series,
                                                  double threshold, double fee_bps = 0.0);

/// Variant with one threshold per minute (rolling mode).
std::vector<MisalignmentEpisode> segment_episodes(const std::vector<AlignedMinute>& series,
                                                  const std::vector<double>& thresholds,
                                                  double fee_bps = 0.0);

/// Seconds from the peak minute until prices re-align. Errors on unresolved
/// episodes.
int64_t decay_time(const MisalignmentEpisode& episode);

struct CumulativeMav {
    double total_mav = 0.0;
    double mav_over_volume = 0.0;
};

/// Sum of one peak value per episode, and that sum over the total traded
/// volume. Zero volume raises DataError.
CumulativeMav cumulative_mav(const std::vector<MisalignmentEpisode>& episodes,
                             double total_volume);

}  // namespace mav
