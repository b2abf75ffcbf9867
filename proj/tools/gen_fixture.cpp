// Deterministic synthetic market-data fixture: a CEX minute-kline file and a
// matching AMM swap log with injected price-misalignment episodes of varied
// amplitude, width, and ambient gas. Committed outputs back the golden-file
// and determinism tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "mav/market_data.hpp"
#include "mav/numeric.hpp"

namespace {

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * u01(rng); }

struct Episode {
    int start = 0;        // minute offset
    int width = 0;        // minutes above threshold
    double amplitude = 0; // |amm - cex| at the peak
    int peak = 0;         // offset of the peak inside [start, start+width)
    double sign = 1.0;
    double gas_boost = 1.0;
};

}  // namespace

int main(int argc, char** argv) {
    const std::string out_dir = argc > 1 ? argv[1] : "tests/data";
    const int64_t t0 = 1688169600;  // 2023-07-01 00:00:00 UTC
    const int minutes = 2880;       // two days

    std::mt19937_64 rng(20230701);

    // CEX price path.
    std::vector<double> cex_close(minutes);
    double price = 1850.0;
    for (int m = 0; m < minutes; ++m) {
        const double z = uniform(rng, -1.0, 1.0);
        price *= 1.0 + 4e-4 * z;
        cex_close[m] = price;
    }

    // Misalignment episodes: a dominant group of ordinary ones plus a few
    // extremes (very large amplitude, long decay with low gas, gas spike).
    std::vector<Episode> episodes;
    {
        const int slots[] = {90,  260,  395,  520,  700,  845,  1010, 1150, 1290,
                             1430, 1585, 1760, 1900, 2040, 2180, 2330, 2520, 2700};
        for (int i = 0; i < 18; ++i) {
            Episode e;
            e.start = slots[i];
            e.sign = (i % 2 == 0) ? 1.0 : -1.0;
            if (i == 4) {
                e.width = 3;
                e.amplitude = 38.0;
            } else if (i == 9) {
                e.width = 5;
                e.amplitude = 12.0;
                e.gas_boost = 0.08;  // quiet venue, long decay
            } else if (i == 13) {
                e.width = 2;
                e.amplitude = 30.0;
                e.gas_boost = 7.5;  // congested venue
            } else if (i == 16) {
                e.width = 4;
                e.amplitude = 20.0;
            } else {
                e.width = 1 + static_cast<int>(u01(rng) * 2.0);
                e.amplitude = uniform(rng, 6.5, 10.5);
            }
            e.peak = e.width / 2;
            episodes.push_back(e);
        }
    }

    // Target AMM spot per minute: CEX close plus baseline noise, overridden
    // inside episodes by the injected divergence (strict peak at e.peak).
    std::vector<double> amm_spot(minutes);
    std::vector<double> gas_level(minutes, 1.0);
    for (int m = 0; m < minutes; ++m) {
        amm_spot[m] = cex_close[m] + uniform(rng, -0.22, 0.22);
    }
    for (const auto& e : episodes) {
        for (int k = 0; k < e.width; ++k) {
            const double falloff = 1.0 - 0.12 * std::abs(k - e.peak);
            amm_spot[e.start + k] = cex_close[e.start + k] + e.sign * e.amplitude * falloff;
        }
        for (int k = -2; k < e.width; ++k) {
            const int m = e.start + k;
            if (m >= 0 && m < minutes) gas_level[m] = e.gas_boost;
        }
    }

    // Pool depth drifts slowly; reserves follow the target spot exactly.
    std::vector<double> res_y(minutes);
    std::vector<double> res_x(minutes);
    for (int m = 0; m < minutes; ++m) {
        res_y[m] = 700.0 * (1.0 + 0.06 * std::sin(m / 380.0));
        res_x[m] = amm_spot[m] * res_y[m];
    }

    // Swap events. The last swap per traded minute lands exactly on the
    // minute's target reserves; earlier swaps are invariant-consistent
    // perturbations around it.
    std::vector<mav::SwapEvent> events;
    int64_t block = 10000000;
    for (int m = 0; m < minutes; ++m) {
        if (m % 37 == 11) continue;  // non-traded minute, state carries forward
        const int count = 1 + static_cast<int>(u01(rng) * 3.0);
        for (int s = 0; s < count; ++s) {
            const bool last = s == count - 1;
            // After-state of this swap.
            double after_x;
            double after_y;
            if (last) {
                after_x = res_x[m];
                after_y = res_y[m];
            } else {
                const double wobble = uniform(rng, -0.4, 0.4);
                after_y = res_y[m] + wobble;
                after_x = (amm_spot[m] + uniform(rng, -0.8, 0.8)) * after_y;
            }
            mav::SwapEvent e;
            e.timestamp = t0 + 60 * m + 4 + s * 17 + static_cast<int>(u01(rng) * 10.0);
            if (s > 0 && u01(rng) < 0.12) {
                e.block_number = events.back().block_number;
                e.tx_index = events.back().tx_index + 1;
            } else {
                block += 1 + static_cast<int64_t>(u01(rng) * 18.0);
                e.block_number = block;
                e.tx_index = static_cast<int32_t>(u01(rng) * 4.0);
            }
            e.log_index = static_cast<int32_t>(u01(rng) * 3.0);

            const bool sell_y = u01(rng) < 0.5;
            if (sell_y) {
                const double y_in = uniform(rng, 0.05, 0.9);
                const double pre_y = after_y - y_in;
                const double pre_x = after_x * after_y / pre_y;  // fee-free invariant
                e.amount_y_in = y_in;
                e.amount_x_out = pre_x - after_x;
                e.reserve_x_before = pre_x;
                e.reserve_y_before = pre_y;
            } else {
                const double x_in = uniform(rng, 90.0, 1600.0);
                const double pre_x = after_x - x_in;
                const double pre_y = after_x * after_y / pre_x;
                e.amount_x_in = x_in;
                e.amount_y_out = pre_y - after_y;
                e.reserve_x_before = pre_x;
                e.reserve_y_before = pre_y;
            }
            e.gas_fee = uniform(rng, 0.03, 0.3) * gas_level[m];
            events.push_back(e);
        }
    }

    std::vector<mav::CexBar> bars(minutes);
    double prev_close = cex_close[0];
    for (int m = 0; m < minutes; ++m) {
        mav::CexBar& b = bars[m];
        b.open_time = t0 + 60 * m;
        b.open = prev_close;
        b.close = cex_close[m];
        b.high = std::max(b.open, b.close) * (1.0 + 1e-4 * u01(rng));
        b.low = std::min(b.open, b.close) * (1.0 - 1e-4 * u01(rng));
        b.volume = uniform(rng, 5.0, 60.0);
        prev_close = b.close;
    }

    mav::write_swaps_csv(out_dir + "/fixture_swaps.csv", events);
    mav::write_cex_csv(out_dir + "/fixture_cex.csv", bars);
    std::printf("wrote %zu swaps, %zu bars, %zu injected episodes under %s\n", events.size(),
                bars.size(), episodes.size(), out_dir.c_str());
    return 0;
}
