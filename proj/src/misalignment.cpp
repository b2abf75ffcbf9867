#include "mav/misalignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mav/errors.hpp"
#include "mav/stats.hpp"

namespace mav {

DeltaSeries build_delta_series(const std::vector<AlignedMinute>& aligned) {
    DeltaSeries s;
    s.points.reserve(aligned.size());
    for (const auto& m : aligned) {
        DeltaPoint p;
        p.minute = m.minute;
        p.delta = m.amm_spot - m.cex_close;
        p.abs_delta = std::abs(p.delta);
        p.relative_delta = m.cex_close != 0.0 ? p.delta / m.cex_close : 0.0;
        s.points.push_back(p);
    }
    return s;
}

double outlier_threshold(const DeltaSeries& deltas) {
    if (deltas.points.size() < 4) {
        throw DataError("outlier threshold needs at least 4 data points");
    }
    std::vector<double> abs;
    abs.reserve(deltas.points.size());
    for (const auto& p : deltas.points) abs.push_back(p.abs_delta);
    std::sort(abs.begin(), abs.end());
    const double q1 = quantile_type7_sorted(abs, 0.25);
    const double q3 = quantile_type7_sorted(abs, 0.75);
    return q3 + 1.5 * (q3 - q1);
}

std::vector<double> rolling_outlier_threshold(const DeltaSeries& deltas, std::size_t window) {
    if (window < 4) throw std::invalid_argument("rolling window must be at least 4 minutes");
    std::vector<double> out(deltas.points.size(), std::numeric_limits<double>::infinity());
    std::vector<double> buf;
    for (std::size_t i = 0; i < deltas.points.size(); ++i) {
        const std::size_t lo = i + 1 >= window ? i + 1 - window : 0;
        buf.clear();
        for (std::size_t j = lo; j <= i; ++j) buf.push_back(deltas.points[j].abs_delta);
        if (buf.size() < 4) continue;
        std::sort(buf.begin(), buf.end());
        const double q1 = quantile_type7_sorted(buf, 0.25);
        const double q3 = quantile_type7_sorted(buf, 0.75);
        out[i] = q3 + 1.5 * (q3 - q1);
    }
    return out;
}

std::vector<MisalignmentEpisode> segment_episodes(const std::vector<AlignedMinute>& series,
                                                  double threshold, double fee_bps) {
    return segment_episodes(series, std::vector<double>(series.size(), threshold), fee_bps);
}

std::vector<MisalignmentEpisode> segment_episodes(const std::vector<AlignedMinute>& series,
                                                  const std::vector<double>& thresholds,
                                                  double fee_bps) {
    if (thresholds.size() != series.size()) {
        throw std::invalid_argument("thresholds must match the series length");
    }
    for (double t : thresholds) {
        if (t < 0.0) throw std::invalid_argument("threshold must be non-negative");
    }

    std::vector<MisalignmentEpisode> episodes;
    std::size_t i = 0;
    const std::size_t n = series.size();
    while (i < n) {
        const double delta_i = std::abs(series[i].amm_spot - series[i].cex_close);
        if (!(delta_i > thresholds[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && std::abs(series[j].amm_spot - series[j].cex_close) > thresholds[j]) ++j;

        MisalignmentEpisode ep;
        ep.start_minute = series[i].minute;
        ep.minutes.assign(series.begin() + static_cast<std::ptrdiff_t>(i),
                          series.begin() + static_cast<std::ptrdiff_t>(j));

        double best = -1.0;
        std::size_t best_idx = i;
        for (std::size_t k = i; k < j; ++k) {
            const PoolState pool{series[k].reserve_x, series[k].reserve_y, fee_bps};
            const MavResult r = mav_cpmm(pool, series[k].cex_close);
            if (r.mav > best) {
                best = r.mav;
                best_idx = k;
                ep.peak_mav = r;
            }
        }
        ep.peak_minute = series[best_idx].minute;
        ep.peak_abs_delta = std::abs(series[best_idx].amm_spot - series[best_idx].cex_close);

        if (j < n) {
            ep.resolved = true;
            ep.end_minute = series[j].minute;
            ep.decay_seconds = ep.end_minute - ep.peak_minute;
        }
        episodes.push_back(std::move(ep));
        i = j;
    }
    return episodes;
}

int64_t decay_time(const MisalignmentEpisode& episode) {
    if (!episode.resolved) {
        throw DataError("decay time undefined for an unresolved episode");
    }
    return episode.decay_seconds;
}

CumulativeMav cumulative_mav(const std::vector<MisalignmentEpisode>& episodes,
                             double total_volume) {
    if (!(total_volume > 0.0)) throw DataError("total traded volume must be positive");
    CumulativeMav c;
    for (const auto& ep : episodes) c.total_mav += ep.peak_mav.mav;
    c.mav_over_volume = c.total_mav / total_volume;
    return c;
}

}  // namespace mav
