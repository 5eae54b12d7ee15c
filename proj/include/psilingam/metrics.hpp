#pragma once

#include <cstdint>
#include <string>

#include "psilingam/errors.hpp"
#include "psilingam/graph.hpp"

namespace psilingam {

struct MetricsReport {
    double tpr = 0.0;
    double fdr = 0.0;
    int shd = 0;
    std::uint64_t seed = 0;
    double seconds = 0.0;
};

namespace detail {

inline void check_metric_inputs(const Adjacency& est, const Adjacency& truth) {
    if (est.rows() != est.cols() || truth.rows() != truth.cols() || est.rows() != truth.rows())
        throw data_error("metrics: adjacency dimensions do not match");
    for (Eigen::Index v = 0; v < est.rows(); ++v)
        if (est(v, v) != 0 || truth(v, v) != 0) throw data_error("metrics: diagonal must be zero");
}

} // namespace detail

/// Fraction of true directed edges recovered; 1 when the truth is empty.
inline double tpr(const Adjacency& est, const Adjacency& truth) {
    detail::check_metric_inputs(est, truth);
    int hits = 0, total = 0;
    for (Eigen::Index i = 0; i < truth.rows(); ++i) {
        for (Eigen::Index j = 0; j < truth.cols(); ++j) {
            if (i == j || truth(i, j) == 0) continue;
            ++total;
            if (est(i, j) != 0) ++hits;
        }
    }
    return total == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(total);
}

/// Fraction of predicted directed edges that are not in the truth; 0 when
/// nothing is predicted. A reversed edge counts as a false discovery.
inline double fdr(const Adjacency& est, const Adjacency& truth) {
    detail::check_metric_inputs(est, truth);
    int wrong = 0, predicted = 0;
    for (Eigen::Index i = 0; i < est.rows(); ++i) {
        for (Eigen::Index j = 0; j < est.cols(); ++j) {
            if (i == j || est(i, j) == 0) continue;
            ++predicted;
            if (truth(i, j) == 0) ++wrong;
        }
    }
    return predicted == 0 ? 0.0 : static_cast<double>(wrong) / static_cast<double>(predicted);
}

/// Structural Hamming distance over unordered pairs: an edge present in only
/// one graph costs 1 (insertion/deletion), opposite orientations cost 1 (flip).
inline int shd(const Adjacency& est, const Adjacency& truth) {
    detail::check_metric_inputs(est, truth);
    int dist = 0;
    for (Eigen::Index i = 0; i < est.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < est.cols(); ++j) {
            if (est(i, j) != 0 && est(j, i) != 0) throw data_error("shd: estimate is not a DAG adjacency");
            if (truth(i, j) != 0 && truth(j, i) != 0)
                throw data_error("shd: truth is not a DAG adjacency");
            const bool in_est = est(i, j) != 0 || est(j, i) != 0;
            const bool in_truth = truth(i, j) != 0 || truth(j, i) != 0;
            if (in_est != in_truth) {
                ++dist;
            } else if (in_est && in_truth && (est(i, j) != truth(i, j))) {
                ++dist; // same pair, opposite orientation
            }
        }
    }
    return dist;
}

} // namespace psilingam
