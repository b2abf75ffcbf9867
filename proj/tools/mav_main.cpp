// mav: arbitrage-value analysis between AMM pools and a zero-impact CEX.
//
// Subcommands: ingest, detect, analyze, report (all driven by a JSON config)
// and mav (one-off closed-form evaluation of a pool/price pair).

#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "mav/amm.hpp"
#include "mav/errors.hpp"
#include "mav/numeric.hpp"
#include "mav/pipeline.hpp"
#include "mav/solver.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kDataError = 2, kNumericError = 3 };

int dispatch(const std::string& command, const std::string& config_path) {
    const mav::RunConfig cfg = mav::load_config(config_path);
    if (command == "ingest") {
        mav::run_ingest(cfg);
    } else if (command == "detect") {
        mav::run_detect(cfg);
    } else if (command == "analyze") {
        mav::run_analyze(cfg);
    } else {
        mav::run_report(cfg);
    }
    return kOk;
}

int run_mav_command(double reserve_x, double reserve_y, double fee_bps, double p_cex,
                    bool verify, std::size_t grid) {
    const mav::PoolState pool{reserve_x, reserve_y, fee_bps};
    if (!pool.valid()) throw std::invalid_argument("pool reserves must be positive");
    const mav::MavResult r = mav::mav_cpmm(pool, p_cex);
    std::printf("p_amm:     %s\n", mav::format_double(r.p_amm).c_str());
    std::printf("p_cex:     %s\n", mav::format_double(r.p_cex).c_str());
    std::printf("direction: %s\n", mav::to_string(r.direction));
    std::printf("v_max:     %s\n", mav::format_double(r.v_max).c_str());
    std::printf("mav:       %s\n", mav::format_double(r.mav).c_str());
    if (verify) {
        const mav::MavResult b = mav::mav_bruteforce(pool, p_cex, grid);
        std::printf("verify (grid %zu): mav %s, relative gap %s\n", grid,
                    mav::format_double(b.mav).c_str(),
                    mav::format_double(mav::rel_diff(r.mav, b.mav)).c_str());
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maximal arbitrage value toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    for (const char* name : {"ingest", "detect", "analyze", "report"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
    }

    auto* mav_cmd = app.add_subcommand("mav", "closed-form MAV for one pool/price pair");
    double reserve_x = 0.0;
    double reserve_y = 0.0;
    double fee_bps = 8.0;
    double p_cex = 0.0;
    bool verify = false;
    std::size_t grid = 1000000;
    mav_cmd->add_option("--reserve-x", reserve_x, "quote reserve")->required();
    mav_cmd->add_option("--reserve-y", reserve_y, "base reserve")->required();
    mav_cmd->add_option("--fee-bps", fee_bps, "pool LP fee in basis points");
    mav_cmd->add_option("--cex-price", p_cex, "zero-impact CEX price")->required();
    mav_cmd->add_flag("--verify", verify, "cross-check against the grid-search oracle");
    mav_cmd->add_option("--grid", grid, "grid points for --verify");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (mav_cmd->parsed()) {
            return run_mav_command(reserve_x, reserve_y, fee_bps, p_cex, verify, grid);
        }
        return dispatch(app.get_subcommands().front()->get_name(), config_path);
    } catch (const mav::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const mav::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kDataError;
    } catch (const mav::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kNumericError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid argument: %s\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kNumericError;
    }
}
