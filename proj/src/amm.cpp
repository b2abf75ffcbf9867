#include "mav/amm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mav/errors.hpp"
#include "mav/numeric.hpp"

namespace mav {

namespace {

void require_valid(const PoolState& pool) {
    if (!pool.valid()) {
        throw std::invalid_argument("pool state invalid: reserves must be positive, fee_bps >= 0");
    }
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) {
        throw std::invalid_argument(std::string(what) + " must be positive");
    }
}

}  // namespace

double spot_price(const PoolState& pool) {
    require_valid(pool);
    return pool.reserve_x / pool.reserve_y;
}

double execution_rate(const PoolState& pool, double dy) {
    require_valid(pool);
    require_positive(dy, "dy");
    // -(L/(y+dy) - L/y)/dy simplifies to x/(y+dy); the direct form is stable
    // for dy near zero.
    return pool.reserve_x / (pool.reserve_y + dy);
}

double price_impact_cpmm(const PoolState& pool, double dy) {
    require_valid(pool);
    require_positive(dy, "dy");
    // 1 - execution/spot == amount_out/reserve_x == dy/(y+dy)
    return dy / (pool.reserve_y + dy);
}

SwapResult apply_swap(const PoolState& pool, Side side, double amount_in, bool apply_fee) {
    require_valid(pool);
    require_positive(amount_in, "amount_in");

    const double fee_fraction = apply_fee ? pool.fee_bps / 10000.0 : 0.0;
    const double in_eff = amount_in * (1.0 - fee_fraction);

    SwapResult res;
    res.amount_in = amount_in;
    if (side == Side::sell_y) {
        const double out = pool.reserve_x * in_eff / (pool.reserve_y + in_eff);
        res.amount_out = out;
        res.execution_rate = out / amount_in;
        res.price_impact = 1.0 - res.execution_rate / (pool.reserve_x / pool.reserve_y);
        res.new_state = PoolState{pool.reserve_x - out, pool.reserve_y + amount_in, pool.fee_bps};
    } else {
        const double out = pool.reserve_y * in_eff / (pool.reserve_x + in_eff);
        res.amount_out = out;
        res.execution_rate = out / amount_in;
        res.price_impact = 1.0 - res.execution_rate / (pool.reserve_y / pool.reserve_x);
        res.new_state = PoolState{pool.reserve_x + amount_in, pool.reserve_y - out, pool.fee_bps};
    }
    return res;
}

double tick_price(int i) {
    if (i < -kMaxTickIndex || i > kMaxTickIndex) {
        throw std::domain_error("tick index out of range: " + std::to_string(i));
    }
    return std::pow(1.0001, static_cast<double>(i));
}

double TickRange::virtual_x() const {
    return x_in_range + x_posted / (std::sqrt(alpha) - 1.0);
}

double TickRange::virtual_y() const {
    return y_in_range + y_posted / (std::sqrt(alpha) - 1.0);
}

double TickRange::virtual_product() const {
    const double scale = 1.0 - 1.0 / std::sqrt(alpha);
    return (x_posted / scale) * (y_posted / scale);
}

bool TickRange::valid() const {
    if (!(alpha > 1.0) || !(x_posted > 0.0) || !(y_posted > 0.0)) return false;
    if (x_in_range < 0.0 || y_in_range < 0.0) return false;
    const double root = std::sqrt(alpha);
    // Reserve drift bounds; the y bound follows the stated (sqrt(alpha)+1)^2
    // form, which is looser than the x-side bound.
    const double slack = 1.0 + 1e-9;
    if (x_in_range > x_posted * (root + 1.0) * slack) return false;
    if (y_in_range > y_posted * (root + 1.0) * (root + 1.0) * slack) return false;
    return lower_price() < upper_price();
}

TickRange TickRange::at_price(int tick_index, double alpha, double x_posted,
                              double y_posted, double price) {
    if (!(alpha > 1.0)) throw std::domain_error("alpha must exceed 1");
    require_positive(x_posted, "x_posted");
    require_positive(y_posted, "y_posted");
    require_positive(price, "price");

    TickRange r;
    r.tick_index = tick_index;
    r.alpha = alpha;
    r.x_posted = x_posted;
    r.y_posted = y_posted;

    const double k = r.virtual_product();
    const double p = std::clamp(price, r.lower_price(), r.upper_price());
    r.x_in_range = std::max(0.0, std::sqrt(k * p) - std::sqrt(k * r.lower_price()));
    r.y_in_range = std::max(0.0, std::sqrt(k / p) - std::sqrt(k / r.upper_price()));
    return r;
}

std::pair<double, double> equivalent_reserves(const TickRange& range) {
    if (!(range.alpha > 1.0)) throw std::domain_error("alpha must exceed 1");
    const double scale = 1.0 - 1.0 / std::sqrt(range.alpha);
    return {range.x_posted / scale, range.y_posted / scale};
}

double price_impact_clmm(const TickRange& range, double dy) {
    if (!(range.alpha > 1.0)) throw std::domain_error("alpha must exceed 1");
    require_positive(dy, "dy");
    if (dy > range.y_in_range) {
        throw TickExhausted("trade exceeds in-range Y budget", range.y_in_range);
    }
    // dx/virtual_x on the virtual constant-product pool.
    return dy / (range.virtual_y() + dy);
}

const TickRange* TickedPool::find(int tick_index) const {
    for (const auto& r : ranges) {
        if (r.tick_index == tick_index) return &r;
    }
    return nullptr;
}

void TickedPool::validate() const {
    if (ranges.empty()) throw std::invalid_argument("ticked pool has no ranges");
    for (const auto& r : ranges) {
        if (!r.valid()) {
            throw std::invalid_argument("invalid range at tick " + std::to_string(r.tick_index));
        }
    }
    for (std::size_t i = 1; i < ranges.size(); ++i) {
        if (ranges[i].tick_index <= ranges[i - 1].tick_index) {
            throw std::invalid_argument("ranges not strictly sorted by tick index");
        }
        if (ranges[i].tick_index != ranges[i - 1].tick_index + 1) {
            throw std::invalid_argument("tick indices not contiguous");
        }
        if (!close_rel(ranges[i - 1].upper_price(), ranges[i].lower_price(), 1e-9)) {
            throw std::invalid_argument("range price bounds do not tile at tick " +
                                        std::to_string(ranges[i].tick_index));
        }
    }
    const TickRange* cur = find(current_tick);
    if (cur == nullptr) throw std::invalid_argument("current_tick has no range");
    const double slack = 1e-9 * cur->upper_price();
    if (spot < cur->lower_price() - slack || spot > cur->upper_price() + slack) {
        throw std::invalid_argument("spot price outside the current tick's bounds");
    }
}

TickedPool TickedPool::mirrored() const {
    TickedPool m;
    m.current_tick = -current_tick - 1;
    m.spot = 1.0 / spot;
    m.ranges.reserve(ranges.size());
    for (auto it = ranges.rbegin(); it != ranges.rend(); ++it) {
        TickRange r;
        r.tick_index = -it->tick_index - 1;
        r.alpha = it->alpha;
        r.x_posted = it->y_posted;
        r.y_posted = it->x_posted;
        r.x_in_range = it->y_in_range;
        r.y_in_range = it->x_in_range;
        m.ranges.push_back(r);
    }
    return m;
}

}  // namespace mav
