#include "mav/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mav/analysis.hpp"
#include "mav/errors.hpp"
#include "mav/fees.hpp"
#include "mav/numeric.hpp"

namespace mav {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolName = "mav";
constexpr const char* kToolVersion = "0.1.0";

// The ratio note carried by every detection summary. Reference totals of
// 104960 over 43730000 evaluate to 0.2400% under the direct quotient; a
// circulated figure of 0.2349% for the same totals does not match it. The
// report always prints its own arithmetic.
constexpr const char* kRatioNote =
    "note: the mav/volume ratio above is the direct quotient of the two totals.\n"
    "reference totals of 104960 / 43730000 evaluate to 0.2400% under this\n"
    "arithmetic, while a circulated figure of 0.2349% for the same totals does\n"
    "not match the direct quotient; this report never substitutes it.\n";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << content;
}

std::string basename_of(const std::string& path) { return fs::path(path).filename().string(); }

ordered_json file_digest_entry(const std::string& path) {
    const std::string bytes = read_file(path);
    ordered_json j;
    j["name"] = basename_of(path);
    j["bytes"] = bytes.size();
    j["fnv64"] = hex64(fnv1a64(bytes));
    return j;
}

void write_manifest(const RunConfig& cfg) {
    ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["config_digest"] = config_digest(cfg);
    ordered_json inputs;
    inputs["swaps"] = file_digest_entry(cfg.swaps_path);
    inputs["cex"] = file_digest_entry(cfg.cex_path);
    j["inputs"] = inputs;

    const char* known[] = {kCanonicalSwapsFile, kCanonicalCexFile, kEpisodesFile,
                           kDailySummaryFile,   kSummaryFile,      kFeaturesFile,
                           kInertiaFile,        kClustersFile,     kPca2dFile,
                           kRegressionFile,     kClusterSummaryFile};
    ordered_json outputs;
    for (const char* name : known) {
        const fs::path p = fs::path(cfg.out_dir) / name;
        if (fs::exists(p)) {
            const std::string bytes = read_file(p.string());
            ordered_json e;
            e["bytes"] = bytes.size();
            e["fnv64"] = hex64(fnv1a64(bytes));
            outputs[name] = e;
        }
    }
    j["outputs"] = outputs;
    write_file(fs::path(cfg.out_dir) / kManifestFile, j.dump(2) + "\n");
}

ordered_json mav_result_json(const MavResult& r) {
    ordered_json j;
    j["direction"] = to_string(r.direction);
    j["p_amm"] = r.p_amm;
    j["p_cex"] = r.p_cex;
    j["v_max"] = r.v_max;
    j["mav"] = r.mav;
    return j;
}

ordered_json minute_json(const AlignedMinute& m) {
    ordered_json j;
    j["minute"] = m.minute;
    j["cex_close"] = m.cex_close;
    j["amm_spot"] = m.amm_spot;
    j["reserve_x"] = m.reserve_x;
    j["reserve_y"] = m.reserve_y;
    j["amm_volume"] = m.amm_volume;
    j["avg_gas"] = m.avg_gas;
    j["swap_count"] = m.swap_count;
    j["traded"] = m.traded;
    return j;
}

}  // namespace

std::string utc_date(int64_t unix_seconds) {
    // Civil-from-days conversion (proleptic Gregorian).
    int64_t z = unix_seconds / 86400;
    if (unix_seconds % 86400 < 0) --z;
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const int64_t doe = z - era * 146097;
    const int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t y = yoe + era * 400;
    const int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const int64_t mp = (5 * doy + 2) / 153;
    const int64_t d = doy - (153 * mp + 2) / 5 + 1;
    const int64_t m = mp < 10 ? mp + 3 : mp - 9;
    const int64_t year = m <= 2 ? y + 1 : y;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04lld-%02lld-%02lld", static_cast<long long>(year),
                  static_cast<long long>(m), static_cast<long long>(d));
    return std::string(buf);
}

std::string format_ratio_percent(double mav, double volume) {
    return format_fixed(100.0 * mav / volume, 4) + "%";
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
    }

    RunConfig cfg;
    try {
        cfg.swaps_path = j.at("swaps").get<std::string>();
        cfg.cex_path = j.at("cex").get<std::string>();
        if (j.contains("schema")) {
            const std::string s = j["schema"].get<std::string>();
            if (s == "csv") {
                cfg.schema = SwapSchema::csv;
            } else if (s == "jsonl") {
                cfg.schema = SwapSchema::jsonl;
            } else {
                throw ConfigError("schema must be \"csv\" or \"jsonl\"");
            }
        }
        if (j.contains("quote_token")) {
            const std::string q = j["quote_token"].get<std::string>();
            if (q == "x") {
                cfg.quote_is_x = true;
            } else if (q == "y") {
                cfg.quote_is_x = false;
            } else {
                throw ConfigError("quote_token must be \"x\" or \"y\"");
            }
        }
        if (j.contains("fee_bps")) cfg.fee_bps = j["fee_bps"].get<double>();
        if (j.contains("threshold")) {
            const auto& t = j["threshold"];
            if (t.contains("mode")) cfg.threshold.mode = t["mode"].get<std::string>();
            if (t.contains("value")) cfg.threshold.value = t["value"].get<double>();
            if (t.contains("rolling")) cfg.threshold.rolling = t["rolling"].get<bool>();
            if (t.contains("window_minutes")) {
                cfg.threshold.window_minutes = t["window_minutes"].get<std::size_t>();
            }
        }
        if (j.contains("k_min")) cfg.k_min = j["k_min"].get<std::size_t>();
        if (j.contains("k_max")) cfg.k_max = j["k_max"].get<std::size_t>();
        if (j.contains("restarts")) cfg.restarts = j["restarts"].get<std::size_t>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
        cfg.out_dir = j.at("out_dir").get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("config field error: ") + ex.what());
    }
    validate_config(cfg);
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (cfg.swaps_path.empty()) throw ConfigError("swaps path is empty");
    if (cfg.cex_path.empty()) throw ConfigError("cex path is empty");
    if (cfg.out_dir.empty()) throw ConfigError("out_dir is empty");
    if (cfg.fee_bps < 0.0) throw ConfigError("fee_bps must be non-negative");
    if (cfg.threshold.mode != "iqr" && cfg.threshold.mode != "fixed") {
        throw ConfigError("threshold mode must be \"iqr\" or \"fixed\"");
    }
    if (cfg.threshold.mode == "fixed" && cfg.threshold.value < 0.0) {
        throw ConfigError("fixed threshold must be non-negative");
    }
    if (cfg.threshold.rolling && cfg.threshold.window_minutes < 4) {
        throw ConfigError("rolling window must be at least 4 minutes");
    }
    if (cfg.k_min < 2 || cfg.k_max > 10 || cfg.k_min >= cfg.k_max) {
        throw ConfigError("k range must satisfy 2 <= k_min < k_max <= 10");
    }
    if (cfg.restarts < 1) throw ConfigError("restarts must be at least 1");
}

std::string config_digest(const RunConfig& cfg) {
    // Paths and out_dir excluded so relocated copies of a run compare equal;
    // the manifest carries the input content digests separately.
    std::ostringstream ss;
    ss << "schema=" << (cfg.schema == SwapSchema::csv ? "csv" : "jsonl")
       << ";quote=" << (cfg.quote_is_x ? "x" : "y") << ";fee_bps=" << format_double(cfg.fee_bps)
       << ";mode=" << cfg.threshold.mode << ";value=" << format_double(cfg.threshold.value)
       << ";rolling=" << (cfg.threshold.rolling ? 1 : 0)
       << ";window=" << cfg.threshold.window_minutes << ";kmin=" << cfg.k_min
       << ";kmax=" << cfg.k_max << ";restarts=" << cfg.restarts << ";seed=" << cfg.seed;
    return hex64(fnv1a64(ss.str()));
}

void run_ingest(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const SwapLoad load = load_swaps(cfg.swaps_path, cfg.schema, cfg.quote_is_x);
    const std::vector<CexBar> bars = load_cex_bars(cfg.cex_path);
    write_swaps_csv((fs::path(cfg.out_dir) / kCanonicalSwapsFile).string(), load.events);
    write_cex_csv((fs::path(cfg.out_dir) / kCanonicalCexFile).string(), bars);
    write_manifest(cfg);

    std::printf("ingested %zu swap events (%zu reordered), %zu cex bars\n", load.events.size(),
                load.reordered_rows, bars.size());
}

void run_detect(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const SwapLoad load = load_swaps(cfg.swaps_path, cfg.schema, cfg.quote_is_x);
    const std::vector<CexBar> bars = load_cex_bars(cfg.cex_path);
    const std::vector<AlignedMinute> aligned = align_minutes(load.events, bars);
    const DeltaSeries deltas = build_delta_series(aligned);

    std::vector<MisalignmentEpisode> episodes;
    double scalar_threshold = 0.0;
    if (cfg.threshold.rolling) {
        const auto thresholds = rolling_outlier_threshold(deltas, cfg.threshold.window_minutes);
        episodes = segment_episodes(aligned, thresholds, cfg.fee_bps);
        scalar_threshold = outlier_threshold(deltas);  // whole-sample value, reported for context
    } else {
        scalar_threshold =
            cfg.threshold.mode == "iqr" ? outlier_threshold(deltas) : cfg.threshold.value;
        episodes = segment_episodes(aligned, scalar_threshold, cfg.fee_bps);
    }

    double total_volume = 0.0;
    std::size_t traded_minutes = 0;
    for (const auto& m : aligned) {
        total_volume += m.amm_volume;
        if (m.traded) ++traded_minutes;
    }

    // Episodes, one JSON object per line.
    {
        std::ostringstream out;
        for (const auto& ep : episodes) {
            ordered_json j;
            j["start_minute"] = ep.start_minute;
            if (ep.resolved) {
                j["end_minute"] = ep.end_minute;
            } else {
                j["end_minute"] = nullptr;
            }
            j["peak_minute"] = ep.peak_minute;
            j["peak_abs_delta"] = ep.peak_abs_delta;
            if (ep.resolved) {
                j["decay_seconds"] = ep.decay_seconds;
            } else {
                j["decay_seconds"] = nullptr;
            }
            j["resolved"] = ep.resolved;
            j["peak_mav"] = mav_result_json(ep.peak_mav);
            j["lp_fee"] = lp_fee(ep.peak_mav.v_max * ep.peak_mav.p_amm, cfg.fee_bps);
            j["clean_mav"] = clean_mav(ep.peak_mav, cfg.fee_bps);
            ordered_json mins = ordered_json::array();
            for (const auto& m : ep.minutes) mins.push_back(minute_json(m));
            j["minutes"] = mins;
            out << j.dump() << "\n";
        }
        write_file(fs::path(cfg.out_dir) / kEpisodesFile, out.str());
    }

    // Per-day summary: the largest absolute misalignment, the day's summed
    // episode peaks, and end-of-day pool value in quote units.
    {
        std::map<std::string, double> day_max_delta;
        std::map<std::string, double> day_mav;
        std::map<std::string, double> day_tvl;
        for (const auto& m : aligned) {
            const std::string day = utc_date(m.minute);
            const double ad = std::abs(m.amm_spot - m.cex_close);
            auto it = day_max_delta.find(day);
            if (it == day_max_delta.end() || ad > it->second) day_max_delta[day] = ad;
            day_tvl[day] = m.reserve_x + m.reserve_y * m.amm_spot;  // last write wins
            if (day_mav.find(day) == day_mav.end()) day_mav[day] = 0.0;
        }
        for (const auto& ep : episodes) {
            day_mav[utc_date(ep.peak_minute)] += ep.peak_mav.mav;
        }
        std::ostringstream out;
        out << "date,max_abs_delta,daily_mav,tvl_eod\n";
        for (const auto& [day, max_delta] : day_max_delta) {
            out << day << ',' << format_double(max_delta) << ',' << format_double(day_mav[day])
                << ',' << format_double(day_tvl[day]) << "\n";
        }
        write_file(fs::path(cfg.out_dir) / kDailySummaryFile, out.str());
    }

    // Human-readable summary.
    {
        std::size_t resolved = 0;
        for (const auto& ep : episodes) {
            if (ep.resolved) ++resolved;
        }
        const CumulativeMav cum = cumulative_mav(episodes, total_volume);
        std::ostringstream out;
        out << "misalignment detection summary\n";
        out << "==============================\n";
        out << "swaps file: " << basename_of(cfg.swaps_path) << "\n";
        out << "cex file: " << basename_of(cfg.cex_path) << "\n";
        out << "aligned minutes: " << aligned.size() << " (traded " << traded_minutes
            << ", carried " << aligned.size() - traded_minutes << ")\n";
        out << "threshold mode: " << cfg.threshold.mode << (cfg.threshold.rolling ? " (rolling)" : "")
            << "\n";
        out << "threshold (|amm spot - cex close|): " << format_double(scalar_threshold) << "\n";
        out << "episodes: " << episodes.size() << " (resolved " << resolved << ", unresolved "
            << episodes.size() - resolved << ")\n";
        out << "cumulative mav (quote units): " << format_double(cum.total_mav) << "\n";
        out << "total amm volume (quote units): " << format_double(total_volume) << "\n";
        out << "mav / volume: " << format_ratio_percent(cum.total_mav, total_volume) << "\n";
        out << kRatioNote;
        write_file(fs::path(cfg.out_dir) / kSummaryFile, out.str());
    }

    write_manifest(cfg);
    std::printf("detected %zu episodes over %zu aligned minutes\n", episodes.size(),
                aligned.size());
}

std::vector<EpisodeRecord> load_episodes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open episodes file: " + path);
    std::vector<EpisodeRecord> out;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& ex) {
            throw DataError("episodes line " + std::to_string(row) + ": bad JSON: " + ex.what());
        }
        EpisodeRecord r;
        r.start_minute = j.at("start_minute").get<int64_t>();
        r.resolved = j.at("resolved").get<bool>();
        if (r.resolved) {
            r.end_minute = j.at("end_minute").get<int64_t>();
            r.decay_seconds = j.at("decay_seconds").get<int64_t>();
        }
        r.peak_minute = j.at("peak_minute").get<int64_t>();
        r.peak_abs_delta = j.at("peak_abs_delta").get<double>();
        const auto& pm = j.at("peak_mav");
        const std::string dir = pm.at("direction").get<std::string>();
        r.peak_mav.direction = dir == "sell-on-amm" ? ArbDirection::sell_on_amm
                               : dir == "buy-on-amm" ? ArbDirection::buy_on_amm
                                                     : ArbDirection::none;
        r.peak_mav.p_amm = pm.at("p_amm").get<double>();
        r.peak_mav.p_cex = pm.at("p_cex").get<double>();
        r.peak_mav.v_max = pm.at("v_max").get<double>();
        r.peak_mav.mav = pm.at("mav").get<double>();
        out.push_back(r);
    }
    return out;
}

void run_analyze(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const fs::path episodes_path = fs::path(cfg.out_dir) / kEpisodesFile;
    if (!fs::exists(episodes_path)) {
        throw DataError("episodes file missing; run detect first: " + episodes_path.string());
    }
    const std::vector<EpisodeRecord> records = load_episodes(episodes_path.string());
    const SwapLoad load = load_swaps(cfg.swaps_path, cfg.schema, cfg.quote_is_x);

    std::vector<MisalignmentEpisode> episodes;
    episodes.reserve(records.size());
    for (const auto& r : records) {
        MisalignmentEpisode ep;
        ep.start_minute = r.start_minute;
        ep.end_minute = r.end_minute;
        ep.peak_minute = r.peak_minute;
        ep.peak_abs_delta = r.peak_abs_delta;
        ep.decay_seconds = r.decay_seconds;
        ep.resolved = r.resolved;
        ep.peak_mav = r.peak_mav;
        episodes.push_back(ep);
    }

    const FeatureBuild build = build_features(episodes, load.events, cfg.fee_bps);
    const std::vector<FeatureRow>& rows = build.rows;
    if (rows.size() < 10) {
        throw DataError("insufficient feature rows for analysis: " + std::to_string(rows.size()) +
                        " (need at least 10); more episodes are required");
    }
    if (rows.size() <= cfg.k_max) {
        throw DataError("insufficient rows (" + std::to_string(rows.size()) +
                        ") for clustering up to k=" + std::to_string(cfg.k_max));
    }

    const Matrix raw = feature_matrix(rows);
    const Matrix z = standardize(raw, StandardizeMode::zscore, feature_names());
    const PcaResult p = pca(z);
    const Matrix proj = pca_project(z, p, 2);

    std::vector<std::pair<std::size_t, double>> inertia_by_k;
    std::map<std::size_t, ClusterReport> reports;
    for (std::size_t k = cfg.k_min; k <= cfg.k_max; ++k) {
        ClusterReport rep = kmeanspp(z, k, cfg.restarts, cfg.seed);
        inertia_by_k.emplace_back(k, rep.inertia);
        reports[k] = std::move(rep);
    }
    const std::size_t k_star = elbow(inertia_by_k);
    const ClusterReport& chosen = reports.at(k_star);
    const Matrix raw_means = cluster_means(raw, chosen.labels, k_star);

    // Majority cluster; ties resolve to the smaller label.
    std::size_t group0 = 0;
    for (std::size_t c = 1; c < chosen.counts.size(); ++c) {
        if (chosen.counts[c] > chosen.counts[group0]) group0 = c;
    }
    std::vector<FeatureRow> group0_rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<std::size_t>(chosen.labels[i]) == group0) group0_rows.push_back(rows[i]);
    }
    const RegressionReport reg = regress_decay(group0_rows);

    // features.csv
    {
        std::ostringstream out;
        out << "time_decay,clean_mav,avg_gas,vmax_on_usage\n";
        for (const auto& r : rows) {
            out << format_double(r.time_decay) << ',' << format_double(r.clean_mav) << ','
                << format_double(r.avg_gas) << ',' << format_double(r.vmax_on_usage) << "\n";
        }
        write_file(fs::path(cfg.out_dir) / kFeaturesFile, out.str());
    }
    // inertia.csv
    {
        std::ostringstream out;
        out << "k,inertia\n";
        for (const auto& [k, inertia] : inertia_by_k) {
            out << k << ',' << format_double(inertia) << "\n";
        }
        write_file(fs::path(cfg.out_dir) / kInertiaFile, out.str());
    }
    // clusters.json
    {
        ordered_json j;
        j["k"] = k_star;
        j["inertia"] = chosen.inertia;
        j["counts"] = chosen.counts;
        j["labels"] = chosen.labels;
        j["feature_names"] = feature_names();
        j["centroids_zscore"] = chosen.centroids;
        j["feature_means_raw"] = raw_means;
        j["group0"] = group0;
        j["pca_variance_fractions"] = p.variance_fractions;
        j["excluded"] = {{"unresolved", build.excluded_unresolved},
                         {"negative_clean_mav", build.excluded_negative_clean},
                         {"no_volume_window", build.excluded_no_window}};
        write_file(fs::path(cfg.out_dir) / kClustersFile, j.dump(2) + "\n");
    }
    // pca2d.csv
    {
        std::ostringstream out;
        out << "pc1,pc2,cluster\n";
        for (std::size_t i = 0; i < proj.size(); ++i) {
            out << format_double(proj[i][0]) << ',' << format_double(proj[i][1]) << ','
                << chosen.labels[i] << "\n";
        }
        write_file(fs::path(cfg.out_dir) / kPca2dFile, out.str());
    }
    // regression.json
    {
        const OlsReport& m = reg.model;
        ordered_json j;
        j["dep_variable"] = "time_decay";
        j["model"] = "OLS";
        j["group0_rows"] = group0_rows.size();
        j["n_obs"] = m.n_obs;
        j["df_resid"] = m.df_resid;
        j["r_squared"] = m.r_squared;
        j["adj_r_squared"] = m.adj_r_squared;
        j["f_statistic"] = m.f_statistic;
        j["prob_f"] = m.prob_f;
        ordered_json terms = ordered_json::array();
        for (std::size_t i = 0; i < m.names.size(); ++i) {
            ordered_json t;
            t["name"] = m.names[i];
            t["coef"] = m.coef[i];
            t["std_err"] = m.std_err[i];
            t["t"] = m.t_stats[i];
            t["p"] = m.p_values[i];
            terms.push_back(t);
        }
        j["terms"] = terms;
        j["durbin_watson"] = m.durbin_watson;
        j["omnibus"] = m.omnibus;
        j["prob_omnibus"] = m.prob_omnibus;
        j["jarque_bera"] = m.jarque_bera;
        j["prob_jb"] = m.prob_jb;
        j["skew"] = m.skew;
        j["kurtosis"] = m.kurtosis;
        j["cond_no"] = m.cond_no;
        j["transforms"] = {{"x1", "clean_mav^(-1/2), scaled by sd, not de-meaned"},
                           {"x2", "avg_gas^(-1/2), scaled by sd, not de-meaned"}};
        j["vmax_on_usage"] = {{"included", false},
                              {"transform", "vmax_on_usage^(-1/2), scaled by sd"},
                              {"t", reg.vmax_t_stat},
                              {"p", reg.vmax_p_value}};
        write_file(fs::path(cfg.out_dir) / kRegressionFile, j.dump(2) + "\n");
    }
    // cluster_summary.txt: aligned columns, one row per cluster.
    {
        std::ostringstream out;
        out << "cluster  count";
        for (const auto& name : feature_names()) {
            out << "  " << name;
        }
        out << "\n";
        for (std::size_t c = 0; c < k_star; ++c) {
            char line[256];
            std::snprintf(line, sizeof(line), "%-7zu  %-5zu  %-10.4g  %-9.4g  %-7.4g  %-13.4g",
                          c, chosen.counts[c], raw_means[c][0], raw_means[c][1], raw_means[c][2],
                          raw_means[c][3]);
            out << line << "\n";
        }
        out << "group0 (majority cluster): " << group0 << "\n";
        write_file(fs::path(cfg.out_dir) / kClusterSummaryFile, out.str());
    }

    write_manifest(cfg);
    std::printf("analyzed %zu feature rows, k*=%zu, group0=%zu (%zu rows)\n", rows.size(), k_star,
                group0, group0_rows.size());
}

void run_report(const RunConfig& cfg) {
    const fs::path out_dir(cfg.out_dir);
    bool printed = false;
    for (const char* name : {kSummaryFile, kClusterSummaryFile}) {
        const fs::path p = out_dir / name;
        if (fs::exists(p)) {
            std::printf("%s", read_file(p.string()).c_str());
            std::printf("\n");
            printed = true;
        }
    }
    const fs::path reg = out_dir / kRegressionFile;
    if (fs::exists(reg)) {
        const nlohmann::json j = nlohmann::json::parse(read_file(reg.string()));
        std::printf("decay-time regression (group0 rows: %zu)\n",
                    j.at("group0_rows").get<std::size_t>());
        std::printf("  r_squared: %.4f  adj: %.4f  durbin-watson: %.4f\n",
                    j.at("r_squared").get<double>(), j.at("adj_r_squared").get<double>(),
                    j.at("durbin_watson").is_null() ? 0.0 : j.at("durbin_watson").get<double>());
        for (const auto& t : j.at("terms")) {
            std::printf("  %-6s coef %12.4f  se %10.4f  t %8.3f  p %.4f\n",
                        t.at("name").get<std::string>().c_str(), t.at("coef").get<double>(),
                        t.at("std_err").get<double>(), t.at("t").get<double>(),
                        t.at("p").get<double>());
        }
        printed = true;
    }
    if (!printed) {
        throw DataError("no outputs found under " + cfg.out_dir + "; run detect/analyze first");
    }
}

}  // namespace mav
