#include "mav/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "mav/errors.hpp"
#include "mav/numeric.hpp"
#include "mav/stats.hpp"

namespace mav {

FeatureBuild build_features(const std::vector<MisalignmentEpisode>& episodes,
                            const std::vector<SwapEvent>& swaps, double fee_bps) {
    FeatureBuild out;
    for (const auto& ep : episodes) {
        if (!ep.resolved) {
            ++out.excluded_unresolved;
            continue;
        }
        const double cm = clean_mav(ep.peak_mav, fee_bps);
        if (!(cm > 0.0)) {
            ++out.excluded_negative_clean;
            continue;
        }
        try {
            const GasWindow gas = avg_gas_window(swaps, ep.peak_minute);
            const VolumeWindow vol = prev_minute_volume(swaps, ep.peak_minute);
            FeatureRow row;
            row.time_decay = static_cast<double>(ep.decay_seconds);
            row.clean_mav = cm;
            row.avg_gas = gas.value;
            row.vmax_on_usage = ep.peak_mav.v_max * ep.peak_mav.p_amm / vol.value;
            out.rows.push_back(row);
        } catch (const DataError&) {
            ++out.excluded_no_window;
        }
    }
    return out;
}

Matrix feature_matrix(const std::vector<FeatureRow>& rows) {
    Matrix m;
    m.reserve(rows.size());
    for (const auto& r : rows) {
        m.push_back({r.time_decay, r.clean_mav, r.avg_gas, r.vmax_on_usage});
    }
    return m;
}

namespace {

std::size_t column_count(const Matrix& m) {
    if (m.empty()) throw std::invalid_argument("empty table");
    const std::size_t d = m.front().size();
    for (const auto& row : m) {
        if (row.size() != d) throw std::invalid_argument("ragged table");
    }
    return d;
}

std::vector<double> column_means(const Matrix& m) {
    const std::size_t d = column_count(m);
    std::vector<double> mu(d, 0.0);
    for (const auto& row : m)
        for (std::size_t j = 0; j < d; ++j) mu[j] += row[j];
    for (auto& v : mu) v /= static_cast<double>(m.size());
    return mu;
}

std::vector<double> column_sds(const Matrix& m, const std::vector<double>& mu) {
    const std::size_t d = mu.size();
    std::vector<double> sd(d, 0.0);
    for (const auto& row : m)
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = row[j] - mu[j];
            sd[j] += dev * dev;
        }
    for (auto& v : sd) v = std::sqrt(v / static_cast<double>(m.size() - 1));
    return sd;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Uniform double in [0,1) from the engine's raw 64-bit output; avoids
// distribution objects so streams are identical across standard libraries.
double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct LloydRun {
    std::vector<int> labels;
    Matrix centroids;
    double inertia = std::numeric_limits<double>::infinity();
};

LloydRun lloyd_once(const Matrix& data, std::size_t k, std::mt19937_64& rng) {
    const std::size_t n = data.size();
    const std::size_t d = data.front().size();

    // D^2-weighted seeding.
    Matrix centroids;
    centroids.reserve(k);
    std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
    {
        const std::size_t first = std::min<std::size_t>(n - 1, static_cast<std::size_t>(u01(rng) * n));
        centroids.push_back(data[first]);
    }
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            min_d2[i] = std::min(min_d2[i], sq_dist(data[i], centroids.back()));
            total += min_d2[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = u01(rng) * total;
            double cum = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cum += min_d2[i];
                if (cum >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = std::min<std::size_t>(n - 1, static_cast<std::size_t>(u01(rng) * n));
        }
        centroids.push_back(data[pick]);
    }

    LloydRun run;
    run.labels.assign(n, 0);
    double prev_inertia = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < 300; ++iter) {
        // Assignment.
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double dist = sq_dist(data[i], centroids[c]);
                if (dist < best) {
                    best = dist;
                    best_c = static_cast<int>(c);
                }
            }
            run.labels[i] = best_c;
            inertia += best;
        }
        if (inertia > prev_inertia * (1.0 + 1e-12) + 1e-12) {
            throw NumericError("Lloyd iteration increased inertia");
        }
        prev_inertia = inertia;
        run.inertia = inertia;

        // Update.
        Matrix next(k, std::vector<double>(d, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[static_cast<std::size_t>(run.labels[i])];
            for (std::size_t j = 0; j < d; ++j) next[static_cast<std::size_t>(run.labels[i])][j] += data[i][j];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // Re-seed an empty cluster with the point farthest from its centroid.
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double dist = sq_dist(data[i], centroids[static_cast<std::size_t>(run.labels[i])]);
                    if (dist > far_d) {
                        far_d = dist;
                        far = i;
                    }
                }
                next[c] = data[far];
            } else {
                for (std::size_t j = 0; j < d; ++j) next[c][j] /= static_cast<double>(counts[c]);
            }
        }

        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) shift = std::max(shift, sq_dist(centroids[c], next[c]));
        centroids = std::move(next);
        if (std::sqrt(shift) < 1e-10) break;
    }

    // Final assignment against the converged centroids.
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (std::size_t c = 0; c < k; ++c) {
            const double dist = sq_dist(data[i], centroids[c]);
            if (dist < best) {
                best = dist;
                best_c = static_cast<int>(c);
            }
        }
        run.labels[i] = best_c;
        inertia += best;
    }
    run.inertia = inertia;
    run.centroids = std::move(centroids);
    return run;
}

}  // namespace

Matrix standardize(const Matrix& table, StandardizeMode mode,
                   const std::vector<std::string>& names) {
    const std::size_t d = column_count(table);
    if (table.size() < 2) throw std::invalid_argument("standardize needs at least 2 rows");
    const auto mu = column_means(table);
    const auto sd = column_sds(table, mu);
    for (std::size_t j = 0; j < d; ++j) {
        if (!(sd[j] > 0.0)) {
            const std::string name = j < names.size() ? names[j] : "#" + std::to_string(j);
            throw NumericError("zero variance in column " + name);
        }
    }
    Matrix out(table.size(), std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < table.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double base = mode == StandardizeMode::zscore ? table[i][j] - mu[j] : table[i][j];
            out[i][j] = base / sd[j];
        }
    }
    return out;
}

PcaResult pca(const Matrix& standardized) {
    const std::size_t d = column_count(standardized);
    const std::size_t n = standardized.size();
    if (n <= d) throw std::invalid_argument("pca needs more rows than columns");

    const auto mu = column_means(standardized);
    std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
    for (const auto& row : standardized) {
        for (std::size_t a = 0; a < d; ++a) {
            const double da = row[a] - mu[a];
            for (std::size_t b = a; b < d; ++b) {
                cov[a][b] += da * (row[b] - mu[b]);
            }
        }
    }
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            cov[a][b] /= static_cast<double>(n - 1);
            cov[b][a] = cov[a][b];
        }

    const EigenDecomposition eig = jacobi_eigen(cov);

    PcaResult res;
    res.eigenvalues.resize(d);
    res.zero_eigenvalue.resize(d);
    double total = 0.0;
    const double lam_max = std::max(eig.values.front(), 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        res.eigenvalues[j] = std::max(eig.values[j], 0.0);
        res.zero_eigenvalue[j] = res.eigenvalues[j] <= 1e-12 * std::max(lam_max, 1e-300);
        total += res.eigenvalues[j];
    }
    if (!(total > 0.0)) throw NumericError("covariance has no variance to decompose");
    res.variance_fractions.resize(d);
    for (std::size_t j = 0; j < d; ++j) res.variance_fractions[j] = res.eigenvalues[j] / total;
    res.components = eig.vectors;
    return res;
}

Matrix pca_project(const Matrix& standardized, const PcaResult& p, std::size_t n_components) {
    const std::size_t d = column_count(standardized);
    if (n_components > p.components.size()) {
        throw std::invalid_argument("more components requested than available");
    }
    const auto mu = column_means(standardized);
    Matrix out(standardized.size(), std::vector<double>(n_components, 0.0));
    for (std::size_t i = 0; i < standardized.size(); ++i) {
        for (std::size_t c = 0; c < n_components; ++c) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                s += (standardized[i][j] - mu[j]) * p.components[c][j];
            }
            out[i][c] = s;
        }
    }
    return out;
}

ClusterReport kmeanspp(const Matrix& data, std::size_t k, std::size_t restarts, uint64_t seed) {
    const std::size_t n = data.size();
    column_count(data);
    if (k == 0 || k > n) throw std::invalid_argument("kmeanspp needs 1 <= k <= n");
    if (restarts < 1) throw std::invalid_argument("kmeanspp needs at least one restart");

    LloydRun best;
    for (std::size_t r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(splitmix64(seed + 0x9e3779b97f4a7c15ULL * (r + 1)));
        LloydRun run = lloyd_once(data, k, rng);
        if (run.inertia < best.inertia) best = std::move(run);
    }

    ClusterReport report;
    report.k = k;
    report.labels = std::move(best.labels);
    report.inertia = best.inertia;
    report.centroids = std::move(best.centroids);
    report.counts.assign(k, 0);
    for (int lab : report.labels) ++report.counts[static_cast<std::size_t>(lab)];
    return report;
}

Matrix cluster_means(const Matrix& raw, const std::vector<int>& labels, std::size_t k) {
    const std::size_t d = column_count(raw);
    if (labels.size() != raw.size()) throw std::invalid_argument("labels/rows size mismatch");
    Matrix means(k, std::vector<double>(d, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        ++counts[c];
        for (std::size_t j = 0; j < d; ++j) means[c][j] += raw[i][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] > 0) {
            for (std::size_t j = 0; j < d; ++j) means[c][j] /= static_cast<double>(counts[c]);
        }
    }
    return means;
}

std::size_t elbow(const std::vector<std::pair<std::size_t, double>>& inertia_by_k) {
    if (inertia_by_k.size() < 3) throw std::invalid_argument("elbow needs at least 3 k values");
    for (std::size_t i = 1; i < inertia_by_k.size(); ++i) {
        if (inertia_by_k[i].first <= inertia_by_k[i - 1].first) {
            throw std::invalid_argument("inertia curve must be sorted by k");
        }
    }
    std::size_t best_k = inertia_by_k[1].first;
    double best_d2 = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < inertia_by_k.size(); ++i) {
        const double d2 = inertia_by_k[i - 1].second - 2.0 * inertia_by_k[i].second +
                          inertia_by_k[i + 1].second;
        if (d2 > best_d2) {
            best_d2 = d2;
            best_k = inertia_by_k[i].first;
        }
    }
    return best_k;
}

OlsReport ols(const Matrix& design, const std::vector<double>& response,
              const std::vector<std::string>& names) {
    const std::size_t d = column_count(design);
    const std::size_t n = design.size();
    if (response.size() != n) throw std::invalid_argument("design/response size mismatch");
    if (n <= d) throw std::invalid_argument("ols needs more observations than regressors");
    if (names.size() != d) throw std::invalid_argument("ols needs one name per column");

    // Normal equations with explicit inverse for the standard errors.
    std::vector<std::vector<double>> xtx(d, std::vector<double>(d, 0.0));
    std::vector<double> xty(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            xty[a] += design[i][a] * response[i];
            for (std::size_t b = a; b < d; ++b) xtx[a][b] += design[i][a] * design[i][b];
        }
    }
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < a; ++b) xtx[a][b] = xtx[b][a];

    // Gauss-Jordan inverse with partial pivoting.
    std::vector<std::vector<double>> aug(d, std::vector<double>(2 * d, 0.0));
    double scale = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        scale = std::max(scale, std::abs(xtx[i][i]));
        for (std::size_t j = 0; j < d; ++j) aug[i][j] = xtx[i][j];
        aug[i][d + i] = 1.0;
    }
    std::vector<std::size_t> col_of_pivot(d);
    for (std::size_t i = 0; i < d; ++i) col_of_pivot[i] = i;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < d; ++r) {
            if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
        }
        if (std::abs(aug[piv][col]) <= 1e-12 * std::max(scale, 1e-300)) {
            throw NumericError("design is rank deficient: column " + names[col] +
                               " is linearly dependent");
        }
        std::swap(aug[piv], aug[col]);
        const double inv_p = 1.0 / aug[col][col];
        for (std::size_t j = 0; j < 2 * d; ++j) aug[col][j] *= inv_p;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col) continue;
            const double f = aug[r][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < 2 * d; ++j) aug[r][j] -= f * aug[col][j];
        }
    }

    std::vector<std::vector<double>> inv(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) inv[i][j] = aug[i][d + j];

    OlsReport rep;
    rep.names = names;
    rep.n_obs = n;
    rep.df_resid = n - d;
    rep.coef.assign(d, 0.0);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) rep.coef[a] += inv[a][b] * xty[b];

    rep.residuals.assign(n, 0.0);
    double ssr = 0.0;
    double y_mean = 0.0;
    for (double y : response) y_mean += y;
    y_mean /= static_cast<double>(n);
    double sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = 0.0;
        for (std::size_t a = 0; a < d; ++a) fit += design[i][a] * rep.coef[a];
        rep.residuals[i] = response[i] - fit;
        ssr += rep.residuals[i] * rep.residuals[i];
        const double dy = response[i] - y_mean;
        sst += dy * dy;
    }
    if (!(sst > 0.0)) throw NumericError("constant response; R^2 undefined");

    const double df = static_cast<double>(rep.df_resid);
    const double s2 = ssr / df;
    rep.std_err.assign(d, 0.0);
    rep.t_stats.assign(d, 0.0);
    rep.p_values.assign(d, 0.0);
    for (std::size_t a = 0; a < d; ++a) {
        rep.std_err[a] = std::sqrt(std::max(0.0, s2 * inv[a][a]));
        rep.t_stats[a] = rep.std_err[a] > 0.0
                             ? rep.coef[a] / rep.std_err[a]
                             : std::numeric_limits<double>::infinity() * (rep.coef[a] >= 0 ? 1 : -1);
        rep.p_values[a] = rep.std_err[a] > 0.0 ? student_t_p_two_sided(rep.t_stats[a], df) : 0.0;
    }

    rep.r_squared = 1.0 - ssr / sst;
    rep.adj_r_squared = 1.0 - (1.0 - rep.r_squared) * (static_cast<double>(n) - 1.0) / df;
    const double k_model = static_cast<double>(d) - 1.0;
    if (k_model > 0.0 && ssr > 0.0) {
        rep.f_statistic = ((sst - ssr) / k_model) / (ssr / df);
        rep.prob_f = f_sf(rep.f_statistic, k_model, df);
    } else {
        rep.f_statistic = std::numeric_limits<double>::infinity();
        rep.prob_f = 0.0;
    }

    if (ssr > 0.0) {
        rep.durbin_watson = durbin_watson(rep.residuals);
        const SampleMoments m = sample_moments(rep.residuals);
        rep.skew = m.skewness;
        rep.kurtosis = m.kurtosis;
        rep.jarque_bera = jarque_bera(n, m.skewness, m.kurtosis);
        rep.prob_jb = chi2_sf_2df(rep.jarque_bera);
        if (n >= 8) {
            rep.omnibus = omnibus_k2(rep.residuals);
            rep.prob_omnibus = chi2_sf_2df(rep.omnibus);
        } else {
            rep.omnibus = std::numeric_limits<double>::quiet_NaN();
            rep.prob_omnibus = std::numeric_limits<double>::quiet_NaN();
        }
    } else {
        // Perfect fit: shape statistics of all-zero residuals are undefined.
        rep.durbin_watson = std::numeric_limits<double>::quiet_NaN();
        rep.skew = rep.kurtosis = std::numeric_limits<double>::quiet_NaN();
        rep.jarque_bera = rep.prob_jb = std::numeric_limits<double>::quiet_NaN();
        rep.omnibus = rep.prob_omnibus = std::numeric_limits<double>::quiet_NaN();
    }

    const EigenDecomposition eig = jacobi_eigen(xtx);
    const double lam_min = eig.values.back();
    rep.cond_no = lam_min > 0.0 ? std::sqrt(eig.values.front() / lam_min)
                                : std::numeric_limits<double>::infinity();
    return rep;
}

RegressionReport regress_decay(const std::vector<FeatureRow>& group0_rows) {
    if (group0_rows.size() < 10) {
        throw DataError("regress_decay needs at least 10 rows, got " +
                        std::to_string(group0_rows.size()));
    }
    Matrix transforms;
    std::vector<double> response;
    transforms.reserve(group0_rows.size());
    for (const auto& r : group0_rows) {
        if (!(r.clean_mav > 0.0) || !(r.avg_gas > 0.0) || !(r.vmax_on_usage > 0.0)) {
            throw DataError("regress_decay needs positive clean_mav, avg_gas and vmax_on_usage");
        }
        transforms.push_back({1.0 / std::sqrt(r.clean_mav), 1.0 / std::sqrt(r.avg_gas),
                              1.0 / std::sqrt(r.vmax_on_usage)});
        response.push_back(r.time_decay);
    }
    const Matrix scaled = standardize(transforms, StandardizeMode::scale_only,
                                      {"x1", "x2", "x3"});

    Matrix design;
    Matrix design_aux;
    design.reserve(scaled.size());
    for (const auto& row : scaled) {
        design.push_back({row[0], row[1], 1.0});
        design_aux.push_back({row[0], row[1], row[2], 1.0});
    }

    RegressionReport rep;
    rep.model = ols(design, response, {"x1", "x2", "const"});
    const OlsReport aux = ols(design_aux, response, {"x1", "x2", "x3", "const"});
    rep.vmax_t_stat = aux.t_stats[2];
    rep.vmax_p_value = aux.p_values[2];
    return rep;
}

}  // namespace mav
