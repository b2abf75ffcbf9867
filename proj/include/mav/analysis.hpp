#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mav/fees.hpp"
#include "mav/misalignment.hpp"

namespace mav {

using Matrix = std::vector<std::vector<double>>;  // row major

// One arbitrage opportunity in feature space: decay seconds, fee-adjusted
// value, ambient gas level, and the trade's size relative to recent venue
// usage.
struct FeatureRow {
    double time_decay = 0.0;
    double clean_mav = 0.0;
    double avg_gas = 0.0;
    double vmax_on_usage = 0.0;
};

inline const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names{"time_decay", "clean_mav", "avg_gas",
                                                "vmax_on_usage"};
    return names;
}

struct FeatureBuild {
    std::vector<FeatureRow> rows;
    std::size_t excluded_unresolved = 0;
    std::size_t excluded_negative_clean = 0;
    std::size_t excluded_no_window = 0;
};

/// One row per resolved episode with positive fee-adjusted value.
/// vmax_on_usage divides the AMM-leg notional by the previous minute's traded
/// volume (stale-carried when that minute is empty); rows whose windows cannot
/// be resolved at all are excluded and counted.
FeatureBuild build_features(const std::vector<MisalignmentEpisode>& episodes,
                            const std::vector<SwapEvent>& swaps, double fee_bps);

Matrix feature_matrix(const std::vector<FeatureRow>& rows);

enum class StandardizeMode {
    zscore,     // (x - mean) / sd
    scale_only  // x / sd, no de-meaning
};

/// Column-wise standardization; sd is the sample (n-1) estimate. A
/// zero-variance column raises NumericError naming the column.
Matrix standardize(const Matrix& table, StandardizeMode mode,
                   const std::vector<std::string>& names = {});

struct PcaResult {
    std::vector<double> eigenvalues;         // descending, clamped at zero
    std::vector<double> variance_fractions;  // eigenvalues / total, sum to 1
    Matrix components;                       // components[j] is the j-th axis
    std::vector<bool> zero_eigenvalue;       // rank-deficiency flags
};

/// Eigendecomposition of the sample covariance of an already-standardized
/// table (n > d).
PcaResult pca(const Matrix& standardized);

/// Projection of the table onto the first n_components axes.
Matrix pca_project(const Matrix& standardized, const PcaResult& p, std::size_t n_components);

struct ClusterReport {
    std::size_t k = 0;
    std::vector<int> labels;
    double inertia = 0.0;
    Matrix centroids;  // per-cluster means of every input feature
    std::vector<std::size_t> counts;
};

/// KMeans++ (D^2 seeding) with Lloyd iterations to convergence, best of
/// `restarts` runs by inertia. Deterministic for a fixed seed.
ClusterReport kmeanspp(const Matrix& data, std::size_t k, std::size_t restarts, uint64_t seed);

/// Per-cluster column means of `raw` under the given labeling (for reporting
/// cluster profiles in raw units).
Matrix cluster_means(const Matrix& raw, const std::vector<int>& labels, std::size_t k);

/// Knee of the inertia curve: the k with the largest second difference;
/// ties resolve to the smaller k. Needs at least 3 (k, inertia) pairs sorted
/// ascending by k.
std::size_t elbow(const std::vector<std::pair<std::size_t, double>>& inertia_by_k);

struct OlsReport {
    std::vector<std::string> names;
    std::vector<double> coef;
    std::vector<double> std_err;
    std::vector<double> t_stats;
    std::vector<double> p_values;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    double f_statistic = 0.0;
    double prob_f = 0.0;
    double durbin_watson = 0.0;
    double omnibus = 0.0;
    double prob_omnibus = 0.0;
    double jarque_bera = 0.0;
    double prob_jb = 0.0;
    double skew = 0.0;
    double kurtosis = 0.0;
    double cond_no = 0.0;
    std::size_t n_obs = 0;
    std::size_t df_resid = 0;
    std::vector<double> residuals;
};

/// Ordinary least squares on an explicit design matrix (include the intercept
/// column yourself). Standard errors use the unbiased residual variance;
/// p-values come from the t distribution with n-d degrees of freedom.
OlsReport ols(const Matrix& design, const std::vector<double>& response,
              const std::vector<std::string>& names);

struct RegressionReport {
    OlsReport model;        // time_decay ~ x1 + x2 + const
    double vmax_t_stat = 0.0;
    double vmax_p_value = 0.0;  // from an auxiliary fit; excluded from the model
};

/// Decay-time model on majority-cluster rows: regressors are the inverse
/// square roots of clean_mav and avg_gas, scaled by their standard deviation
/// but not de-meaned. The vmax_on_usage transform is evaluated the same way in
/// an auxiliary fit and only its significance is reported.
RegressionReport regress_decay(const std::vector<FeatureRow>& group0_rows);

}  // namespace mav
