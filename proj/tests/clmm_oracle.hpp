#pragma once

// Fine-step forward simulator over a ticked pool: sells the base token in
// small increments at exact constant-product execution on each tick's virtual
// reserves, crossing tick bounds, and tracks the running profit against the
// CEX price. Independent of the solver's tick walk.

#include <cmath>
#include <cstddef>

#include "mav/amm.hpp"

namespace testsup {

struct FineStepResult {
    double best_profit = 0.0;
    double best_volume = 0.0;
    double final_price = 0.0;
    bool exhausted = false;
};

inline FineStepResult fine_step_mav(const mav::TickedPool& pool, double p_cex,
                                    double step_fraction) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < pool.ranges.size(); ++i) {
        if (pool.ranges[i].tick_index == pool.current_tick) idx = i;
    }

    double k = pool.ranges[idx].virtual_product();
    double x_v = std::sqrt(k * pool.spot);
    double y_v = std::sqrt(k / pool.spot);
    const double step = step_fraction * y_v;

    FineStepResult res;
    res.final_price = pool.spot;
    double proceeds = 0.0;
    double volume = 0.0;

    while (true) {
        const double spot = x_v / y_v;
        res.final_price = spot;
        if (spot <= p_cex) break;

        const double p_lower = pool.ranges[idx].lower_price();
        const double capacity = std::sqrt(k / p_lower) - y_v;
        if (capacity <= 0.0) {
            if (idx == 0) {
                res.exhausted = true;
                break;
            }
            --idx;
            k = pool.ranges[idx].virtual_product();
            const double entry = pool.ranges[idx].upper_price();
            x_v = std::sqrt(k * entry);
            y_v = std::sqrt(k / entry);
            continue;
        }
        const double dy = std::min(step, capacity);
        const double dx = x_v * dy / (y_v + dy);
        proceeds += dx;
        volume += dy;
        y_v += dy;
        x_v -= dx;
        const double profit = proceeds - volume * p_cex;
        if (profit > res.best_profit) {
            res.best_profit = profit;
            res.best_volume = volume;
        }
    }
    return res;
}

}  // namespace testsup
