#pragma once

#include <cstddef>
#include <vector>

namespace mav {

/// Type-7 quantile (linear interpolation) of an ascending-sorted sample.
double quantile_type7_sorted(const std::vector<double>& sorted, double p);

/// Regularized incomplete beta I_x(a, b) via continued fraction; ~1e-14
/// internal tolerance.
double incomplete_beta(double a, double b, double x);

/// CDF of Student's t with nu degrees of freedom.
double student_t_cdf(double t, double nu);

/// Two-sided p-value for a t statistic with nu degrees of freedom.
double student_t_p_two_sided(double t, double nu);

/// Upper tail P(F > f) for an F(d1, d2) statistic.
double f_sf(double f, double d1, double d2);

/// Upper tail of chi-squared with 2 degrees of freedom, exp(-x/2).
double chi2_sf_2df(double x);

struct EigenDecomposition {
    std::vector<double> values;                // descending
    std::vector<std::vector<double>> vectors;  // vectors[j] pairs with values[j]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
EigenDecomposition jacobi_eigen(const std::vector<std::vector<double>>& sym);

double durbin_watson(const std::vector<double>& residuals);

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;  // population (biased) form, as used by the shape stats
    double skewness = 0.0;
    double kurtosis = 0.0;  // raw kurtosis; 3 for a normal
};

SampleMoments sample_moments(const std::vector<double>& xs);

/// Jarque-Bera statistic from sample skewness and raw kurtosis.
double jarque_bera(std::size_t n, double skewness, double kurtosis);

/// D'Agostino-Pearson K^2 omnibus normality statistic of the residuals.
double omnibus_k2(const std::vector<double>& xs);

}  // namespace mav
