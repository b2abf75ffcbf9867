#include "mav/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "mav/errors.hpp"
#include "mav/numeric.hpp"

namespace mav {

namespace {

constexpr const char* kSwapHeader =
    "timestamp,block_number,tx_index,log_index,amount_x_in,amount_x_out,"
    "amount_y_in,amount_y_out,reserve_x_before,reserve_y_before,gas_fee";
constexpr const char* kSwapHeaderL1L2 =
    "timestamp,block_number,tx_index,log_index,amount_x_in,amount_x_out,"
    "amount_y_in,amount_y_out,reserve_x_before,reserve_y_before,gas_fee,l1_fee,l2_fee";
constexpr const char* kCexHeader = "open_time,open,high,low,close,volume";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, std::size_t row, const char* field) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw DataError("row " + std::to_string(row) + ": bad number in field " + field +
                        ": '" + s + "'");
    }
    return v;
}

int64_t parse_int(const std::string& s, std::size_t row, const char* field) {
    int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw DataError("row " + std::to_string(row) + ": bad integer in field " + field +
                        ": '" + s + "'");
    }
    return v;
}

auto order_key(const SwapEvent& e) {
    return std::tuple(e.block_number, e.tx_index, e.log_index);
}

void check_event(const SwapEvent& e, std::size_t row) {
    const bool x_in = e.amount_x_in > 0.0;
    const bool y_in = e.amount_y_in > 0.0;
    if (x_in == y_in) {
        throw DataError("row " + std::to_string(row) +
                        ": exactly one of amount_x_in/amount_y_in must be positive");
    }
    if (e.amount_x_in < 0.0 || e.amount_x_out < 0.0 || e.amount_y_in < 0.0 ||
        e.amount_y_out < 0.0) {
        throw DataError("row " + std::to_string(row) + ": negative token amount");
    }
    if (!(e.reserve_x_before > 0.0) || !(e.reserve_y_before > 0.0)) {
        throw DataError("row " + std::to_string(row) + ": reserves must be positive");
    }
}

void swap_roles(SwapEvent& e) {
    std::swap(e.amount_x_in, e.amount_y_in);
    std::swap(e.amount_x_out, e.amount_y_out);
    std::swap(e.reserve_x_before, e.reserve_y_before);
}

SwapEvent parse_swap_csv_row(const std::vector<std::string>& f, std::size_t row, bool has_l1l2) {
    SwapEvent e;
    e.timestamp = parse_int(f[0], row, "timestamp");
    e.block_number = parse_int(f[1], row, "block_number");
    e.tx_index = static_cast<int32_t>(parse_int(f[2], row, "tx_index"));
    e.log_index = static_cast<int32_t>(parse_int(f[3], row, "log_index"));
    e.amount_x_in = parse_double(f[4], row, "amount_x_in");
    e.amount_x_out = parse_double(f[5], row, "amount_x_out");
    e.amount_y_in = parse_double(f[6], row, "amount_y_in");
    e.amount_y_out = parse_double(f[7], row, "amount_y_out");
    e.reserve_x_before = parse_double(f[8], row, "reserve_x_before");
    e.reserve_y_before = parse_double(f[9], row, "reserve_y_before");
    e.gas_fee = parse_double(f[10], row, "gas_fee");
    if (has_l1l2) {
        e.l1_fee = parse_double(f[11], row, "l1_fee");
        e.l2_fee = parse_double(f[12], row, "l2_fee");
    }
    return e;
}

SwapEvent parse_swap_json_line(const std::string& line, std::size_t row) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
        throw DataError("row " + std::to_string(row) + ": bad JSON: " + ex.what());
    }
    SwapEvent e;
    try {
        e.timestamp = j.at("timestamp").get<int64_t>();
        e.block_number = j.at("block_number").get<int64_t>();
        e.tx_index = j.at("tx_index").get<int32_t>();
        e.log_index = j.at("log_index").get<int32_t>();
        e.amount_x_in = j.at("amount_x_in").get<double>();
        e.amount_x_out = j.at("amount_x_out").get<double>();
        e.amount_y_in = j.at("amount_y_in").get<double>();
        e.amount_y_out = j.at("amount_y_out").get<double>();
        e.reserve_x_before = j.at("reserve_x_before").get<double>();
        e.reserve_y_before = j.at("reserve_y_before").get<double>();
        e.gas_fee = j.at("gas_fee").get<double>();
        if (j.contains("l1_fee")) e.l1_fee = j.at("l1_fee").get<double>();
        if (j.contains("l2_fee")) e.l2_fee = j.at("l2_fee").get<double>();
    } catch (const nlohmann::json::exception& ex) {
        throw DataError("row " + std::to_string(row) + ": missing or mistyped field: " + ex.what());
    }
    return e;
}

}  // namespace

SwapLoad load_swaps(const std::string& path, SwapSchema schema, bool quote_is_x) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open swap file: " + path);

    SwapLoad load;
    std::string line;
    std::size_t row = 0;

    if (schema == SwapSchema::csv) {
        if (!std::getline(in, line)) throw DataError("empty swap file: " + path);
        ++row;
        bool has_l1l2 = false;
        std::string header = line;
        if (!header.empty() && header.back() == '\r') header.pop_back();
        if (header == kSwapHeaderL1L2) {
            has_l1l2 = true;
        } else if (header != kSwapHeader) {
            throw DataError("swap CSV header mismatch in " + path);
        }
        const std::size_t want = has_l1l2 ? 13 : 11;
        while (std::getline(in, line)) {
            ++row;
            if (line.empty() || line == "\r") continue;
            const auto fields = split_csv(line);
            if (fields.size() != want) {
                throw DataError("row " + std::to_string(row) + ": expected " +
                                std::to_string(want) + " fields, got " +
                                std::to_string(fields.size()));
            }
            SwapEvent e = parse_swap_csv_row(fields, row, has_l1l2);
            if (!quote_is_x) swap_roles(e);
            check_event(e, row);
            load.events.push_back(e);
        }
    } else {
        while (std::getline(in, line)) {
            ++row;
            if (line.empty() || line == "\r") continue;
            SwapEvent e = parse_swap_json_line(line, row);
            if (!quote_is_x) swap_roles(e);
            check_event(e, row);
            load.events.push_back(e);
        }
    }

    for (std::size_t i = 1; i < load.events.size(); ++i) {
        if (order_key(load.events[i]) < order_key(load.events[i - 1])) ++load.reordered_rows;
    }
    std::stable_sort(load.events.begin(), load.events.end(),
                     [](const SwapEvent& a, const SwapEvent& b) { return order_key(a) < order_key(b); });
    for (std::size_t i = 1; i < load.events.size(); ++i) {
        if (order_key(load.events[i]) == order_key(load.events[i - 1])) {
            throw DataError("duplicate event key (block " +
                            std::to_string(load.events[i].block_number) + ", tx " +
                            std::to_string(load.events[i].tx_index) + ", log " +
                            std::to_string(load.events[i].log_index) + ")");
        }
    }
    return load;
}

void write_swaps_csv(const std::string& path, const std::vector<SwapEvent>& events) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write swap file: " + path);
    bool has_l1l2 = false;
    for (const auto& e : events) {
        if (e.l1_fee.has_value() && e.l2_fee.has_value()) {
            has_l1l2 = true;
            break;
        }
    }
    out << (has_l1l2 ? kSwapHeaderL1L2 : kSwapHeader) << '\n';
    for (const auto& e : events) {
        out << e.timestamp << ',' << e.block_number << ',' << e.tx_index << ',' << e.log_index
            << ',' << format_double(e.amount_x_in) << ',' << format_double(e.amount_x_out) << ','
            << format_double(e.amount_y_in) << ',' << format_double(e.amount_y_out) << ','
            << format_double(e.reserve_x_before) << ',' << format_double(e.reserve_y_before)
            << ',' << format_double(e.gas_fee);
        if (has_l1l2) {
            out << ',' << format_double(e.l1_fee.value_or(0.0)) << ','
                << format_double(e.l2_fee.value_or(0.0));
        }
        out << '\n';
    }
}

std::vector<CexBar> load_cex_bars(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open CEX file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty CEX file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCexHeader) throw DataError("CEX CSV header mismatch in " + path);

    std::vector<CexBar> bars;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv(line);
        if (f.size() != 6) {
            throw DataError("row " + std::to_string(row) + ": expected 6 fields");
        }
        CexBar b;
        b.open_time = parse_int(f[0], row, "open_time");
        b.open = parse_double(f[1], row, "open");
        b.high = parse_double(f[2], row, "high");
        b.low = parse_double(f[3], row, "low");
        b.close = parse_double(f[4], row, "close");
        b.volume = parse_double(f[5], row, "volume");
        if (b.open_time % 60 != 0) {
            throw DataError("row " + std::to_string(row) + ": open_time not minute aligned");
        }
        if (b.low > std::min(b.open, b.close) || b.high < std::max(b.open, b.close)) {
            throw DataError("row " + std::to_string(row) + ": OHLC bounds violated");
        }
        bars.push_back(b);
    }
    std::sort(bars.begin(), bars.end(),
              [](const CexBar& a, const CexBar& b) { return a.open_time < b.open_time; });
    for (std::size_t i = 1; i < bars.size(); ++i) {
        if (bars[i].open_time == bars[i - 1].open_time) {
            throw DataError("duplicate CEX bar at open_time " + std::to_string(bars[i].open_time));
        }
    }
    return bars;
}

void write_cex_csv(const std::string& path, const std::vector<CexBar>& bars) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write CEX file: " + path);
    out << kCexHeader << '\n';
    for (const auto& b : bars) {
        out << b.open_time << ',' << format_double(b.open) << ',' << format_double(b.high) << ','
            << format_double(b.low) << ',' << format_double(b.close) << ','
            << format_double(b.volume) << '\n';
    }
}

std::vector<AlignedMinute> align_minutes(const std::vector<SwapEvent>& swaps,
                                         const std::vector<CexBar>& bars) {
    if (swaps.empty() || bars.empty()) throw DataError("align_minutes needs nonempty inputs");

    int64_t swap_lo = swaps.front().timestamp;
    int64_t swap_hi = swaps.front().timestamp;
    for (const auto& e : swaps) {
        swap_lo = std::min(swap_lo, e.timestamp);
        swap_hi = std::max(swap_hi, e.timestamp);
    }
    const int64_t start = std::max((swap_lo / 60) * 60, bars.front().open_time);
    const int64_t end = std::min((swap_hi / 60) * 60, bars.back().open_time);
    if (start > end) throw DataError("swap and CEX time ranges do not overlap");

    // Swaps are canonically ordered by block, which tracks time; re-order by
    // timestamp for the per-minute scan (stable within a minute).
    std::vector<const SwapEvent*> by_time;
    by_time.reserve(swaps.size());
    for (const auto& e : swaps) by_time.push_back(&e);
    std::stable_sort(by_time.begin(), by_time.end(),
                     [](const SwapEvent* a, const SwapEvent* b) { return a->timestamp < b->timestamp; });

    std::vector<AlignedMinute> out;
    out.reserve(static_cast<std::size_t>((end - start) / 60 + 1));

    std::size_t si = 0;
    std::size_t bi = 0;
    double last_spot = 0.0;
    double last_rx = 0.0;
    double last_ry = 0.0;
    double last_close = bars.front().close;
    bool have_state = false;

    // Consume swaps before the overlap so carried state is available.
    while (si < by_time.size() && by_time[si]->timestamp < start) {
        last_rx = by_time[si]->reserve_x_after();
        last_ry = by_time[si]->reserve_y_after();
        last_spot = last_rx / last_ry;
        have_state = true;
        ++si;
    }

    for (int64_t minute = start; minute <= end; minute += 60) {
        AlignedMinute m;
        m.minute = minute;

        while (bi < bars.size() && bars[bi].open_time <= minute) {
            last_close = bars[bi].close;
            ++bi;
        }
        m.cex_close = last_close;

        double vol = 0.0;
        double gas = 0.0;
        int count = 0;
        while (si < by_time.size() && by_time[si]->timestamp < minute + 60) {
            const SwapEvent& e = *by_time[si];
            vol += e.quote_volume();
            gas += e.gas_fee;
            ++count;
            last_rx = e.reserve_x_after();
            last_ry = e.reserve_y_after();
            last_spot = last_rx / last_ry;
            have_state = true;
            ++si;
        }

        if (!have_state) {
            // Cannot happen for the overlap as computed, kept as a guard.
            throw DataError("no AMM state available at minute " + std::to_string(minute));
        }
        m.amm_spot = last_spot;
        m.reserve_x = last_rx;
        m.reserve_y = last_ry;
        m.amm_volume = vol;
        m.swap_count = count;
        m.avg_gas = count > 0 ? gas / count : 0.0;
        m.traded = count > 0;
        out.push_back(m);
    }
    return out;
}

std::vector<BlockGroup> block_groups(const std::vector<SwapEvent>& swaps) {
    std::vector<BlockGroup> groups;
    for (const auto& e : swaps) {
        if (groups.empty() || groups.back().block_number != e.block_number) {
            groups.push_back(BlockGroup{e.block_number, {}});
        }
        groups.back().events.push_back(e);
    }
    return groups;
}

}  // namespace mav
