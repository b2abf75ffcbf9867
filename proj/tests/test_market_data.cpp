#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "mav/errors.hpp"
#include "mav/market_data.hpp"
#include "mav/numeric.hpp"
#include "support.hpp"

using namespace mav;

namespace {

const char* kHeader =
    "timestamp,block_number,tx_index,log_index,amount_x_in,amount_x_out,amount_y_in,"
    "amount_y_out,reserve_x_before,reserve_y_before,gas_fee\n";

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("mav_md_" + name)).string();
}

std::string three_rows_sorted() {
    std::string s = kHeader;
    s += "1688169600,100,0,0,0,199.2,0.1,0,200000,100,0.05\n";
    s += "1688169605,100,1,0,1000,0,0,0.49,199800.8,100.1,0.07\n";
    s += "1688169660,101,0,2,0,150.5,0.08,0,200800.8,99.61,0.04\n";
    return s;
}

}  // namespace

TEST_CASE("loads a valid csv fixture in canonical order") {
    const std::string path = tmp_path("valid.csv");
    testsup::spit(path, three_rows_sorted());
    const SwapLoad load = load_swaps(path, SwapSchema::csv);
    REQUIRE(load.events.size() == 3);
    CHECK(load.reordered_rows == 0);
    CHECK(load.events[0].block_number == 100);
    CHECK(load.events[0].tx_index == 0);
    CHECK(load.events[1].tx_index == 1);
    CHECK(load.events[2].block_number == 101);
    CHECK(load.events[0].quote_volume() == doctest::Approx(199.2));
}

TEST_CASE("rejects a row with both token inputs positive") {
    const std::string path = tmp_path("bothin.csv");
    std::string s = kHeader;
    s += "1688169600,100,0,0,10,0,0.1,0,200000,100,0.05\n";
    testsup::spit(path, s);
    try {
        load_swaps(path, SwapSchema::csv);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
}

TEST_CASE("rejects malformed numbers with the row number") {
    const std::string path = tmp_path("badnum.csv");
    std::string s = kHeader;
    s += "1688169600,100,0,0,0,199.2,0.1,0,200000,100,0.05\n";
    s += "1688169605,100,1,0,abc,0,0,0.49,199800.8,100.1,0.07\n";
    testsup::spit(path, s);
    try {
        load_swaps(path, SwapSchema::csv);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 3") != std::string::npos);
        CHECK(msg.find("amount_x_in") != std::string::npos);
    }
}

TEST_CASE("shuffled input sorts to the canonical order with a warning count") {
    const std::string sorted_path = tmp_path("sorted.csv");
    const std::string shuffled_path = tmp_path("shuffled.csv");
    testsup::spit(sorted_path, three_rows_sorted());
    std::string shuffled = kHeader;
    shuffled += "1688169660,101,0,2,0,150.5,0.08,0,200800.8,99.61,0.04\n";
    shuffled += "1688169600,100,0,0,0,199.2,0.1,0,200000,100,0.05\n";
    shuffled += "1688169605,100,1,0,1000,0,0,0.49,199800.8,100.1,0.07\n";
    testsup::spit(shuffled_path, shuffled);

    const SwapLoad a = load_swaps(sorted_path, SwapSchema::csv);
    const SwapLoad b = load_swaps(shuffled_path, SwapSchema::csv);
    CHECK(b.reordered_rows > 0);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].block_number == b.events[i].block_number);
        CHECK(a.events[i].tx_index == b.events[i].tx_index);
        CHECK(a.events[i].log_index == b.events[i].log_index);
    }
}

TEST_CASE("duplicate keys are rejected") {
    const std::string path = tmp_path("dup.csv");
    std::string s = kHeader;
    s += "1688169600,100,0,0,0,199.2,0.1,0,200000,100,0.05\n";
    s += "1688169601,100,0,0,1000,0,0,0.49,199800.8,100.1,0.07\n";
    testsup::spit(path, s);
    CHECK_THROWS_AS(load_swaps(path, SwapSchema::csv), DataError);
}

TEST_CASE("jsonl schema loads the same events") {
    const std::string path = tmp_path("events.jsonl");
    std::string s;
    s += R"({"timestamp":1688169600,"block_number":100,"tx_index":0,"log_index":0,"amount_x_in":0,"amount_x_out":199.2,"amount_y_in":0.1,"amount_y_out":0,"reserve_x_before":200000,"reserve_y_before":100,"gas_fee":0.05})";
    s += "\n";
    s += R"({"timestamp":1688169605,"block_number":100,"tx_index":1,"log_index":0,"amount_x_in":1000,"amount_x_out":0,"amount_y_in":0,"amount_y_out":0.49,"reserve_x_before":199800.8,"reserve_y_before":100.1,"gas_fee":0.07})";
    s += "\n";
    testsup::spit(path, s);
    const SwapLoad load = load_swaps(path, SwapSchema::jsonl);
    REQUIRE(load.events.size() == 2);
    CHECK(load.events[0].amount_x_out == doctest::Approx(199.2));
    CHECK(load.events[1].amount_x_in == doctest::Approx(1000.0));
}

TEST_CASE("quote token declaration swaps the column roles") {
    const std::string path = tmp_path("quote.csv");
    testsup::spit(path, three_rows_sorted());
    const SwapLoad swapped = load_swaps(path, SwapSchema::csv, false);
    CHECK(swapped.events[0].amount_y_out == doctest::Approx(199.2));
    CHECK(swapped.events[0].amount_x_in == doctest::Approx(0.1));
    CHECK(swapped.events[0].reserve_x_before == doctest::Approx(100.0));
}

TEST_CASE("load then serialize is a byte-identical fixed point") {
    const std::string path = tmp_path("fp0.csv");
    testsup::spit(path, three_rows_sorted());
    const SwapLoad first = load_swaps(path, SwapSchema::csv);
    const std::string out1 = tmp_path("fp1.csv");
    write_swaps_csv(out1, first.events);
    const SwapLoad second = load_swaps(out1, SwapSchema::csv);
    const std::string out2 = tmp_path("fp2.csv");
    write_swaps_csv(out2, second.events);
    CHECK(testsup::slurp(out1) == testsup::slurp(out2));
}

TEST_CASE("cex bars") {
    const std::string path = tmp_path("bars.csv");
    SUBCASE("valid bars with a gap preserved") {
        std::string s = "open_time,open,high,low,close,volume\n";
        s += "1688169600,1850,1851,1849,1850.5,12\n";
        s += "1688169660,1850.5,1852,1850,1851,9\n";
        s += "1688169840,1851,1851.5,1850,1850.2,4\n";  // two minutes missing
        testsup::spit(path, s);
        const auto bars = load_cex_bars(path);
        REQUIRE(bars.size() == 3);
        CHECK(bars[2].open_time - bars[1].open_time == 180);
    }
    SUBCASE("non-minute-aligned open_time is rejected") {
        std::string s = "open_time,open,high,low,close,volume\n";
        s += "1688169630,1850,1851,1849,1850.5,12\n";
        testsup::spit(path, s);
        CHECK_THROWS_AS(load_cex_bars(path), DataError);
    }
    SUBCASE("OHLC bound violations are rejected") {
        std::string s = "open_time,open,high,low,close,volume\n";
        s += "1688169600,1850,1849,1848,1850.5,12\n";  // high below open
        testsup::spit(path, s);
        CHECK_THROWS_AS(load_cex_bars(path), DataError);
    }
}

namespace {

SwapEvent make_swap(int64_t ts, int64_t block, double rx_before, double ry_before, double y_in) {
    SwapEvent e;
    e.timestamp = ts;
    e.block_number = block;
    e.amount_y_in = y_in;
    const double rx_after = rx_before * ry_before / (ry_before + y_in);
    e.amount_x_out = rx_before - rx_after;
    e.reserve_x_before = rx_before;
    e.reserve_y_before = ry_before;
    e.gas_fee = 0.05;
    return e;
}

std::vector<CexBar> flat_bars(int64_t start, int count, double price) {
    std::vector<CexBar> bars;
    for (int i = 0; i < count; ++i) {
        bars.push_back(CexBar{start + 60 * i, price, price, price, price, 10.0});
    }
    return bars;
}

}  // namespace

TEST_CASE("align_minutes") {
    const int64_t t0 = 1688169600;

    SUBCASE("carry-forward marks non-traded minutes") {
        std::vector<SwapEvent> swaps;
        swaps.push_back(make_swap(t0 + 10, 100, 200000.0, 100.0, 0.2));
        swaps.push_back(make_swap(t0 + 130, 101, 199000.0, 100.4, 0.1));
        const auto aligned = align_minutes(swaps, flat_bars(t0, 3, 1990.0));
        REQUIRE(aligned.size() == 3);
        CHECK(aligned[0].traded);
        CHECK_FALSE(aligned[1].traded);
        CHECK(aligned[2].traded);
        CHECK(aligned[1].amm_spot == aligned[0].amm_spot);
        CHECK(aligned[1].amm_volume == 0.0);
    }

    SUBCASE("spot equals the reserve ratio after the minute's last swap") {
        std::vector<SwapEvent> swaps;
        swaps.push_back(make_swap(t0 + 5, 100, 200000.0, 100.0, 0.2));
        swaps.push_back(make_swap(t0 + 40, 101, 199602.0, 100.2, 0.3));
        const auto aligned = align_minutes(swaps, flat_bars(t0, 1, 1990.0));
        REQUIRE(aligned.size() == 1);
        const SwapEvent& last = swaps[1];
        CHECK(rel_diff(aligned[0].amm_spot, last.reserve_x_after() / last.reserve_y_after()) <
              1e-9);
        CHECK(aligned[0].swap_count == 2);
    }

    SUBCASE("overlap trims to the range intersection") {
        std::vector<SwapEvent> swaps;
        for (int m = 0; m <= 10; ++m) {
            swaps.push_back(make_swap(t0 + 60 * m + 5, 100 + m, 200000.0, 100.0, 0.1));
        }
        const auto aligned = align_minutes(swaps, flat_bars(t0 + 300, 16, 1990.0));
        REQUIRE(!aligned.empty());
        CHECK(aligned.front().minute == t0 + 300);
        CHECK(aligned.back().minute == t0 + 600);
        CHECK(aligned.size() == 6);
    }

    SUBCASE("empty overlap raises") {
        std::vector<SwapEvent> swaps;
        swaps.push_back(make_swap(t0, 100, 200000.0, 100.0, 0.1));
        CHECK_THROWS_AS(align_minutes(swaps, flat_bars(t0 + 3600, 3, 1990.0)), DataError);
    }

    SUBCASE("per-minute volumes add up to the fixture total") {
        std::vector<SwapEvent> swaps;
        double total = 0.0;
        std::mt19937_64 rng(31);
        for (int m = 0; m < 30; ++m) {
            const int n = 1 + static_cast<int>(testsup::u01(rng) * 3.0);
            for (int s = 0; s < n; ++s) {
                SwapEvent e = make_swap(t0 + 60 * m + 3 + 7 * s, 100 + m * 10 + s, 200000.0,
                                        100.0, testsup::uniform(rng, 0.05, 0.4));
                total += e.quote_volume();
                swaps.push_back(e);
            }
        }
        const auto aligned = align_minutes(swaps, flat_bars(t0, 30, 1990.0));
        double sum = 0.0;
        for (const auto& m : aligned) sum += m.amm_volume;
        CHECK(rel_diff(sum, total) < 1e-9);
    }
}

TEST_CASE("block groups partition preserving order") {
    std::vector<SwapEvent> swaps;
    swaps.push_back(make_swap(1000, 7, 200000.0, 100.0, 0.1));
    swaps.push_back(make_swap(1001, 7, 199000.0, 100.1, 0.1));
    swaps.push_back(make_swap(1002, 9, 198000.0, 100.2, 0.1));
    swaps[0].tx_index = 0;
    swaps[1].tx_index = 3;

    const auto groups = block_groups(swaps);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].block_number == 7);
    CHECK(groups[0].events.size() == 2);
    CHECK(groups[0].events[0].tx_index == 0);
    CHECK(groups[0].events[1].tx_index == 3);
    CHECK(groups[1].events.size() == 1);

    const auto single = block_groups({swaps[2]});
    REQUIRE(single.size() == 1);
    CHECK(single[0].events.size() == 1);
}
