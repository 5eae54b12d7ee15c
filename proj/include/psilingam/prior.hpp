#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "psilingam/data_matrix.hpp"
#include "psilingam/errors.hpp"
#include "psilingam/graph.hpp"
#include "psilingam/stats.hpp"

namespace psilingam {

/// Unordered variable pairs {i, j}, i < j, no duplicates.
struct EdgeSet {
    std::vector<std::pair<int, int>> pairs;

    bool contains(int i, int j) const {
        if (i > j) std::swap(i, j);
        return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(i, j));
    }
    std::size_t size() const { return pairs.size(); }
};

inline EdgeSet make_edge_set(std::vector<std::pair<int, int>> pairs) {
    for (auto& [i, j] : pairs) {
        if (i == j) throw data_error("edge set contains a self-loop");
        if (i > j) std::swap(i, j);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return EdgeSet{std::move(pairs)};
}

/// p x p matrix over {0, 1, -1}: 0 = no directed edge i->j, 1 = known directed
/// edge i->j, -1 = edge status unknown.
struct PriorMatrix {
    Eigen::MatrixXi values;

    Eigen::Index p() const { return values.rows(); }
};

inline PriorMatrix make_prior_matrix(Eigen::MatrixXi values) {
    if (values.rows() != values.cols()) throw data_error("prior matrix must be square");
    const Eigen::Index p = values.rows();
    Adjacency known(p, p);
    known.setZero();
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            const int v = values(i, j);
            if (v != 0 && v != 1 && v != -1) throw data_error("prior entries must be in {0, 1, -1}");
            if (i == j && v != 0) throw data_error("prior diagonal must be zero");
            if (v == 1) known(i, j) = 1;
        }
    }
    if (!is_acyclic(known)) throw data_error("prior's known edges contain a directed cycle");
    return PriorMatrix{std::move(values)};
}

inline PriorMatrix uninformative_prior(Eigen::Index p) {
    Eigen::MatrixXi values = Eigen::MatrixXi::Constant(p, p, -1);
    values.diagonal().setZero();
    return PriorMatrix{std::move(values)};
}

/// Symmetric matrix of screened partial correlations with the conditioning set
/// recorded per unordered pair (row-major upper triangle).
struct PsiScores {
    Eigen::MatrixXd values;
    std::vector<std::vector<int>> cond_sets;
    std::vector<std::uint8_t> degenerate; // pairs whose conditioning failed; score 0

    Eigen::Index p() const { return values.rows(); }

    /// Index of pair {i, j}, i < j, in the flattened upper triangle.
    std::size_t pair_index(int i, int j) const {
        if (i > j) std::swap(i, j);
        const auto dp = static_cast<std::size_t>(p());
        const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
        return ui * dp - ui * (ui + 1) / 2 + (uj - ui - 1);
    }
    std::size_t n_pairs() const {
        const auto dp = static_cast<std::size_t>(p());
        return dp * (dp - 1) / 2;
    }
};

namespace detail {

/// Partial correlation from a precomputed covariance: invert the covariance of
/// {i, j} + cond and read -O_ij / sqrt(O_ii O_jj) off the precision matrix.
inline double partial_corr_from_cov(const Eigen::MatrixXd& cov, int i, int j,
                                    const std::vector<int>& cond) {
    const int m = 2 + static_cast<int>(cond.size());
    std::vector<int> idx;
    idx.reserve(m);
    idx.push_back(i);
    idx.push_back(j);
    idx.insert(idx.end(), cond.begin(), cond.end());

    Eigen::MatrixXd sub(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) sub(a, b) = cov(idx[a], idx[b]);

    Eigen::LLT<Eigen::MatrixXd> llt(sub);
    if (llt.info() != Eigen::Success) throw numerical_error("degenerate conditioning set");
    const Eigen::MatrixXd omega = llt.solve(Eigen::MatrixXd::Identity(m, m));
    const double oii = omega(0, 0), ojj = omega(1, 1);
    if (!(oii > 0.0) || !(ojj > 0.0) || !std::isfinite(oii) || !std::isfinite(ojj) ||
        !std::isfinite(omega(0, 1)))
        throw numerical_error("degenerate conditioning set");
    return std::clamp(-omega(0, 1) / std::sqrt(oii * ojj), -1.0, 1.0);
}

inline Eigen::MatrixXd sample_covariance_matrix(const DataMatrix& data) {
    const Eigen::MatrixXd centered = data.values.rowwise() - data.values.colwise().mean();
    return (centered.transpose() * centered) / static_cast<double>(data.n() - 1);
}

} // namespace detail

/// Sample partial correlation of columns i and j given the columns in cond.
inline double partial_corr(const DataMatrix& data, int i, int j, const std::vector<int>& cond) {
    if (i == j) throw data_error("partial_corr: i and j must differ");
    for (int c : cond)
        if (c == i || c == j) throw data_error("partial_corr: conditioning set must exclude i and j");
    if (static_cast<Eigen::Index>(cond.size()) + 2 > data.n() - 1)
        throw data_error("partial_corr: conditioning set too large for sample size");
    return detail::partial_corr_from_cov(detail::sample_covariance_matrix(data), i, j, cond);
}

/// Correlation screening: per node, the neighbors whose Pearson correlation is
/// significant under the Fisher z-test at alpha1, truncated to the
/// min(floor(n/log n), p-1) largest |correlation| entries. Returned sets are
/// sorted by index.
inline std::vector<std::vector<int>> correlation_screen(const DataMatrix& data, double alpha1) {
    const int p = static_cast<int>(data.p());
    const Eigen::Index n = data.n();
    const double sqrt_scale = n > 3 ? std::sqrt(static_cast<double>(n - 3)) : 0.0;
    const int cap = std::min(static_cast<int>(static_cast<double>(n) / std::log(static_cast<double>(n))),
                             p - 1);

    Eigen::MatrixXd z(n, p);
    for (int j = 0; j < p; ++j) z.col(j) = standardize(data.values.col(j));
    const Eigen::MatrixXd corr = (z.transpose() * z) / static_cast<double>(n - 1);

    std::vector<std::vector<int>> neighborhoods(p);
    for (int i = 0; i < p; ++i) {
        std::vector<int> candidates;
        for (int j = 0; j < p; ++j) {
            if (j == i) continue;
            if (fisher_z_pvalue(corr(i, j), sqrt_scale) <= alpha1) candidates.push_back(j);
        }
        std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
            const double ra = std::abs(corr(i, a)), rb = std::abs(corr(i, b));
            return ra != rb ? ra > rb : a < b;
        });
        if (static_cast<int>(candidates.size()) > cap) candidates.resize(cap);
        std::sort(candidates.begin(), candidates.end());
        neighborhoods[i] = std::move(candidates);
    }
    return neighborhoods;
}

/// Screened partial correlations: score(i,j) = partial correlation of i, j
/// given the union of their screened neighborhoods. Degenerate pairs score 0
/// and are flagged rather than aborting the sweep.
inline PsiScores psi_scores(const DataMatrix& data, const std::vector<std::vector<int>>& neighborhoods) {
    const int p = static_cast<int>(data.p());
    if (static_cast<int>(neighborhoods.size()) != p)
        throw data_error("psi_scores: neighborhood count does not match p");

    PsiScores scores;
    scores.values = Eigen::MatrixXd::Zero(p, p);
    scores.cond_sets.resize(static_cast<std::size_t>(p) * (p - 1) / 2);
    scores.degenerate.assign(scores.cond_sets.size(), 0);

    const Eigen::MatrixXd cov = detail::sample_covariance_matrix(data);
    std::vector<int> cond;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            cond.clear();
            std::set_union(neighborhoods[i].begin(), neighborhoods[i].end(),
                           neighborhoods[j].begin(), neighborhoods[j].end(), std::back_inserter(cond));
            cond.erase(std::remove_if(cond.begin(), cond.end(), [&](int c) { return c == i || c == j; }),
                       cond.end());
            const std::size_t k = scores.pair_index(i, j);
            scores.cond_sets[k] = cond;
            double score = 0.0;
            if (static_cast<Eigen::Index>(cond.size()) + 2 > data.n() - 1) {
                scores.degenerate[k] = 1;
            } else {
                try {
                    score = detail::partial_corr_from_cov(cov, i, j, cond);
                } catch (const numerical_error&) {
                    scores.degenerate[k] = 1;
                    score = 0.0;
                }
            }
            scores.values(i, j) = score;
            scores.values(j, i) = score;
        }
    }
    return scores;
}

/// Fisher z-test of each screened score with effective sample size
/// n - |cond| - 2, then Benjamini-Hochberg at alpha2 across all pairs.
inline EdgeSet psi_edge_test(const PsiScores& scores, Eigen::Index n, double alpha2) {
    const int p = static_cast<int>(scores.p());
    std::size_t max_cond = 0;
    for (const auto& cond : scores.cond_sets) max_cond = std::max(max_cond, cond.size());
    if (static_cast<std::size_t>(n) <= max_cond + 3)
        throw data_error("psi_edge_test: sample size too small for the conditioning sets");

    std::vector<double> pvalues(scores.n_pairs(), 1.0);
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            const std::size_t k = scores.pair_index(i, j);
            if (scores.degenerate[k]) continue;
            const double dof = static_cast<double>(n) - static_cast<double>(scores.cond_sets[k].size()) - 3.0;
            pvalues[k] = fisher_z_pvalue(scores.values(i, j), std::sqrt(dof));
        }
    }
    const std::vector<bool> reject = benjamini_hochberg(pvalues, alpha2);

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (reject[scores.pair_index(i, j)]) pairs.emplace_back(i, j);
    return make_edge_set(std::move(pairs));
}

/// Prior extraction: a_ij = a_ji = -1 for {i,j} in the edge set, else 0.
inline PriorMatrix build_prior(const EdgeSet& edges, int p) {
    Eigen::MatrixXi values = Eigen::MatrixXi::Zero(p, p);
    for (const auto& [i, j] : edges.pairs) {
        if (i < 0 || j < 0 || i >= p || j >= p) throw data_error("build_prior: edge index out of range");
        values(i, j) = -1;
        values(j, i) = -1;
    }
    return PriorMatrix{std::move(values)};
}

} // namespace psilingam
