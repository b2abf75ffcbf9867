#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mav/market_data.hpp"
#include "mav/misalignment.hpp"

namespace mav {

struct ThresholdConfig {
    std::string mode = "iqr";  // "iqr" | "fixed"
    double value = 0.0;        // used by fixed mode
    bool rolling = false;
    std::size_t window_minutes = 1440;
};

struct RunConfig {
    std::string swaps_path;
    std::string cex_path;
    SwapSchema schema = SwapSchema::csv;
    bool quote_is_x = true;
    double fee_bps = 8.0;
    ThresholdConfig threshold;
    std::size_t k_min = 2;
    std::size_t k_max = 10;
    std::size_t restarts = 16;
    uint64_t seed = 1;
    std::string out_dir;
};

/// Parses and validates a JSON run configuration. Raises ConfigError.
RunConfig load_config(const std::string& path);
void validate_config(const RunConfig& cfg);

/// Digest of the semantic configuration (paths and out_dir excluded, so runs
/// of the same data from different locations compare equal).
std::string config_digest(const RunConfig& cfg);

// Fixed output names under out_dir.
inline constexpr const char* kEpisodesFile = "episodes.jsonl";
inline constexpr const char* kDailySummaryFile = "daily_summary.csv";
inline constexpr const char* kSummaryFile = "summary.txt";
inline constexpr const char* kFeaturesFile = "features.csv";
inline constexpr const char* kInertiaFile = "inertia.csv";
inline constexpr const char* kClustersFile = "clusters.json";
inline constexpr const char* kPca2dFile = "pca2d.csv";
inline constexpr const char* kRegressionFile = "regression.json";
inline constexpr const char* kClusterSummaryFile = "cluster_summary.txt";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kCanonicalSwapsFile = "swaps.csv";
inline constexpr const char* kCanonicalCexFile = "cex.csv";

/// Validates the inputs and writes canonical copies plus a manifest.
void run_ingest(const RunConfig& cfg);

/// Full detection pass: aligned series, threshold, episodes, per-day summary
/// and the human-readable summary with cumulative MAV and the MAV/volume
/// ratio.
void run_detect(const RunConfig& cfg);

/// Feature building, PCA, clustering with the inertia elbow, and the decay
/// regression, from a previously written episodes file.
void run_analyze(const RunConfig& cfg);

/// Prints the combined text report assembled from the run's outputs.
void run_report(const RunConfig& cfg);

/// 4-decimal percent rendering of a MAV/volume ratio, e.g. "0.2400%".
std::string format_ratio_percent(double mav, double volume);

/// Episode record reduced to what downstream analysis consumes.
struct EpisodeRecord {
    int64_t start_minute = 0;
    int64_t end_minute = 0;
    int64_t peak_minute = 0;
    double peak_abs_delta = 0.0;
    int64_t decay_seconds = 0;
    bool resolved = false;
    MavResult peak_mav;
};

std::vector<EpisodeRecord> load_episodes(const std::string& path);

/// UTC calendar date "YYYY-MM-DD" of a unix timestamp.
std::string utc_date(int64_t unix_seconds);

}  // namespace mav
