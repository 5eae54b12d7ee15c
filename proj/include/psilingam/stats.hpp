#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <Eigen/Dense>

#include "psilingam/errors.hpp"

namespace psilingam {

inline double mean(const Eigen::VectorXd& x) { return x.mean(); }

/// Sample variance with the n-1 denominator.
inline double sample_variance(const Eigen::VectorXd& x) {
    const auto n = x.size();
    if (n < 2) return 0.0;
    const double m = x.mean();
    return (x.array() - m).square().sum() / static_cast<double>(n - 1);
}

inline double sample_sd(const Eigen::VectorXd& x) { return std::sqrt(sample_variance(x)); }

/// Zero mean, unit sample variance. Throws on a (near-)constant vector.
inline Eigen::VectorXd standardize(const Eigen::VectorXd& x) {
    const double sd = sample_sd(x);
    if (!(sd > 0.0)) throw numerical_error("standardize: zero variance");
    return (x.array() - x.mean()) / sd;
}

inline double sample_covariance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const auto n = x.size();
    if (n < 2) return 0.0;
    const double mx = x.mean(), my = y.mean();
    return ((x.array() - mx) * (y.array() - my)).sum() / static_cast<double>(n - 1);
}

inline double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double sx = sample_sd(x), sy = sample_sd(y);
    if (!(sx > 0.0) || !(sy > 0.0)) throw numerical_error("pearson: zero variance column");
    return sample_covariance(x, y) / (sx * sy);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

/// Upper tail 1 - Phi(x), computed without cancellation.
inline double normal_sf(double x) { return 0.5 * std::erfc(x * M_SQRT1_2); }

/// Standard normal quantile. Boost's implementation is accurate to a few ulp,
/// well inside 1e-9 absolute over the open unit interval.
inline double normal_quantile(double p) {
    static const boost::math::normal_distribution<double> dist(0.0, 1.0);
    return boost::math::quantile(dist, p);
}

/// P(T <= t) for Student's t with (possibly fractional) df.
inline double student_t_cdf(double t, double df) {
    const boost::math::students_t_distribution<double> dist(df);
    return boost::math::cdf(dist, t);
}

/// Two-sided p-value for a t statistic. Infinite t maps to p = 0.
inline double student_t_pvalue(double t, double df) {
    if (std::isinf(t)) return 0.0;
    const boost::math::students_t_distribution<double> dist(df);
    return 2.0 * boost::math::cdf(dist, -std::abs(t));
}

/// Two-sided p-value of a Fisher z-transformed correlation, z = atanh(r) * sqrt(scale).
inline double fisher_z_pvalue(double r, double sqrt_scale) {
    const double rc = std::clamp(r, -1.0 + 1e-15, 1.0 - 1e-15);
    const double z = std::atanh(rc) * sqrt_scale;
    return 2.0 * normal_sf(std::abs(z));
}

/// Benjamini-Hochberg step-up at level alpha. Returns the rejection mask
/// (order-independent: everything at or below the critical p-value is rejected).
inline std::vector<bool> benjamini_hochberg(const std::vector<double>& pvalues, double alpha) {
    const std::size_t m = pvalues.size();
    std::vector<bool> reject(m, false);
    if (m == 0) return reject;
    std::vector<double> sorted(pvalues);
    std::sort(sorted.begin(), sorted.end());
    double cutoff = -1.0;
    for (std::size_t k = m; k >= 1; --k) {
        if (sorted[k - 1] <= alpha * static_cast<double>(k) / static_cast<double>(m)) {
            cutoff = sorted[k - 1];
            break;
        }
    }
    if (cutoff < 0.0) return reject;
    for (std::size_t i = 0; i < m; ++i) reject[i] = pvalues[i] <= cutoff;
    return reject;
}

} // namespace psilingam
