#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "psilingam/data_matrix.hpp"
#include "psilingam/errors.hpp"
#include "psilingam/gaussianize.hpp"
#include "psilingam/graph.hpp"
#include "psilingam/prior.hpp"
#include "psilingam/stats.hpp"

namespace psilingam {

/// Variable ordering: sequence[k] = the variable extracted at round k (causes
/// first), position[v] = rank of variable v in that sequence.
struct CausalOrder {
    std::vector<int> sequence;
    std::vector<int> position;
};

inline CausalOrder make_causal_order(std::vector<int> sequence) {
    const int p = static_cast<int>(sequence.size());
    std::vector<int> position(p, -1);
    for (int k = 0; k < p; ++k) {
        const int v = sequence[static_cast<std::size_t>(k)];
        if (v < 0 || v >= p || position[v] != -1) throw data_error("causal order is not a permutation");
        position[v] = k;
    }
    return CausalOrder{std::move(sequence), std::move(position)};
}

/// Weighted adjacency: weights(i, j) = strength of edge i -> j; the support is
/// acyclic and the diagonal zero.
struct WeightedDag {
    Eigen::MatrixXd weights;
    std::vector<std::string> labels;

    Eigen::Index p() const { return weights.rows(); }
};

inline Adjacency support(const WeightedDag& dag) {
    const Eigen::Index p = dag.p();
    Adjacency adj(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) adj(i, j) = (i != j && dag.weights(i, j) != 0.0) ? 1 : 0;
    return adj;
}

inline WeightedDag make_weighted_dag(Eigen::MatrixXd weights, std::vector<std::string> labels = {}) {
    if (weights.rows() != weights.cols()) throw data_error("weight matrix must be square");
    const Eigen::Index p = weights.rows();
    if (!weights.allFinite()) throw data_error("weight matrix has non-finite entries");
    for (Eigen::Index i = 0; i < p; ++i)
        if (weights(i, i) != 0.0) throw data_error("weight matrix diagonal must be zero");
    if (labels.empty()) labels = default_labels(p);
    if (static_cast<Eigen::Index>(labels.size()) != p)
        throw data_error("label count does not match weight matrix size");
    WeightedDag dag{std::move(weights), std::move(labels)};
    if (!is_acyclic(support(dag))) throw data_error("weight matrix support contains a cycle");
    return dag;
}

/// Binary adjacency keeping entries with |weight| > tau.
inline Adjacency threshold_graph(const WeightedDag& dag, double tau) {
    if (tau < 0.0) throw data_error("threshold must be nonnegative");
    const Eigen::Index p = dag.p();
    Adjacency adj(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) adj(i, j) = (i != j && std::abs(dag.weights(i, j)) > tau) ? 1 : 0;
    return adj;
}

namespace detail {

inline constexpr double kNegentropyK1 = 79.047;
inline constexpr double kNegentropyK2 = 7.4129;
inline constexpr double kNegentropyGamma = 0.37457;

/// Maximum-entropy approximation of the differential entropy of a standardized
/// sample: H(nu) - k1 [E log cosh w - gamma]^2 - k2 [E w exp(-w^2/2)]^2.
inline double approx_entropy(const Eigen::VectorXd& w) {
    const double n = static_cast<double>(w.size());
    double c1 = 0.0, c2 = 0.0;
    for (Eigen::Index t = 0; t < w.size(); ++t) {
        const double x = w[t];
        c1 += std::log(std::cosh(x));
        c2 += x * std::exp(-0.5 * x * x);
    }
    c1 /= n;
    c2 /= n;
    const double d1 = c1 - kNegentropyGamma;
    return 0.5 * (1.0 + std::log(2.0 * M_PI)) - kNegentropyK1 * d1 * d1 - kNegentropyK2 * c2 * c2;
}

/// Standardize, mapping (near-)constant vectors to zeros instead of throwing.
inline Eigen::VectorXd safe_standardize(const Eigen::VectorXd& x) {
    const double sd = sample_sd(x);
    if (!(sd > 1e-150)) return Eigen::VectorXd::Zero(x.size());
    return (x.array() - x.mean()) / sd;
}

/// Likelihood-ratio statistic preferring the model u -> v over v -> u,
/// evaluated on standardized inputs with entropies of u and v precomputed.
/// Positive means u -> v fits better.
inline double directional_lr(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double entropy_u,
                             double entropy_v) {
    const double n1 = static_cast<double>(u.size() - 1);
    const double rho = u.dot(v) / n1;
    const Eigen::VectorXd res_v_on_u = safe_standardize(v - rho * u);
    const Eigen::VectorXd res_u_on_v = safe_standardize(u - rho * v);
    return (entropy_v + approx_entropy(res_u_on_v)) - (entropy_u + approx_entropy(res_v_on_u));
}

} // namespace detail

/// Residual of column i regressed on column j: x_i - (cov/var) x_j.
inline Eigen::VectorXd pairwise_residual(const DataMatrix& data, int i, int j) {
    if (i == j) throw data_error("pairwise_residual: i and j must differ");
    const Eigen::VectorXd xi = data.values.col(i);
    const Eigen::VectorXd xj = data.values.col(j);
    const double var = sample_variance(xj);
    if (!(var > 0.0)) throw numerical_error("pairwise_residual: regressor has zero variance");
    return xi - (sample_covariance(xi, xj) / var) * xj;
}

/// Saturation value returned for exactly linearly dependent inputs (the
/// negentropy of a degenerate residual).
inline constexpr double kDependenceSaturation =
    detail::kNegentropyK1 * detail::kNegentropyGamma * detail::kNegentropyGamma;

/// Nonnegative dependence between two samples: the magnitude of the
/// negentropy-approximation likelihood ratio comparing the model u -> v
/// against v -> u. Near zero for independent samples; saturates at
/// kDependenceSaturation when |corr(u, v)| = 1.
inline double pairwise_dependence(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (u.size() != v.size()) throw data_error("pairwise_dependence: length mismatch");
    if (u.size() < 10) throw data_error("pairwise_dependence: need at least 10 samples");
    const Eigen::VectorXd us = standardize(u);
    const Eigen::VectorXd vs = standardize(v);
    const double rho = us.dot(vs) / static_cast<double>(u.size() - 1);
    if (1.0 - rho * rho < 1e-12) return kDependenceSaturation;
    return std::abs(detail::directional_lr(us, vs, detail::approx_entropy(us), detail::approx_entropy(vs)));
}

/// Iterative exogenous-variable extraction under a prior. Each round keeps the
/// candidates with no known remaining parent, scores each candidate j by the
/// one-sided directional statistic summed over pairs the prior leaves open
/// (pairs the prior rules out in both directions are skipped), extracts the
/// argmin with lowest-index tie-break, and residualizes the remaining columns
/// on the extracted variable.
inline CausalOrder find_causal_order(const DataMatrix& data, const PriorMatrix& prior) {
    const int p = static_cast<int>(data.p());
    if (prior.p() != p) throw data_error("find_causal_order: prior size does not match data");

    std::vector<Eigen::VectorXd> cols(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) cols[static_cast<std::size_t>(v)] = data.values.col(v);

    std::vector<int> remaining(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) remaining[static_cast<std::size_t>(v)] = v;

    std::vector<int> sequence;
    sequence.reserve(static_cast<std::size_t>(p));

    std::vector<Eigen::VectorXd> zstd(static_cast<std::size_t>(p));
    std::vector<double> entropy(static_cast<std::size_t>(p));
    std::vector<std::uint8_t> cached(static_cast<std::size_t>(p));

    while (!remaining.empty()) {
        std::vector<int> candidates;
        for (int j : remaining) {
            bool has_known_parent = false;
            for (int i : remaining)
                if (i != j && prior.values(i, j) == 1) {
                    has_known_parent = true;
                    break;
                }
            if (!has_known_parent) candidates.push_back(j);
        }
        if (candidates.empty()) throw data_error("prior admits no causal order");

        int chosen = candidates.front();
        if (remaining.size() > 1 && candidates.size() > 1) {
            std::fill(cached.begin(), cached.end(), std::uint8_t{0});
            auto standardized = [&](int v) -> const Eigen::VectorXd& {
                auto uv = static_cast<std::size_t>(v);
                if (!cached[uv]) {
                    zstd[uv] = detail::safe_standardize(cols[uv]);
                    entropy[uv] = detail::approx_entropy(zstd[uv]);
                    cached[uv] = 1;
                }
                return zstd[uv];
            };

            double best = std::numeric_limits<double>::infinity();
            for (int j : candidates) {
                double total = 0.0;
                for (int i : remaining) {
                    if (i == j) continue;
                    if (prior.values(i, j) == 0 && prior.values(j, i) == 0) continue;
                    const Eigen::VectorXd& zj = standardized(j);
                    const Eigen::VectorXd& zi = standardized(i);
                    const double lr = detail::directional_lr(zj, zi, entropy[static_cast<std::size_t>(j)],
                                                             entropy[static_cast<std::size_t>(i)]);
                    const double viol = std::min(0.0, lr);
                    total += viol * viol;
                }
                if (total < best) {
                    best = total;
                    chosen = j;
                }
            }
        }

        sequence.push_back(chosen);
        const Eigen::VectorXd& xj = cols[static_cast<std::size_t>(chosen)];
        const double var = sample_variance(xj);
        for (int i : remaining) {
            if (i == chosen) continue;
            // Residualize only prior-adjacent columns. Non-adjacent columns keep
            // their data: at p > n, unconditional updates exhaust the sample
            // variance of every column long before the order is complete.
            if (prior.values(i, chosen) == 0 && prior.values(chosen, i) == 0) continue;
            if (var > 1e-150) {
                auto& xi = cols[static_cast<std::size_t>(i)];
                xi -= (sample_covariance(xi, xj) / var) * xj;
            }
        }
        remaining.erase(std::remove(remaining.begin(), remaining.end(), chosen), remaining.end());
    }
    return make_causal_order(std::move(sequence));
}

namespace detail {

struct WeightEstimate {
    WeightedDag dag;
    Eigen::MatrixXd tstats; // per coefficient; 0 where no edge
    Eigen::VectorXd dof;    // per column: residual degrees of freedom of its regression
    std::vector<std::string> warnings;
};

inline WeightEstimate estimate_weights_full(const DataMatrix& data, const CausalOrder& order,
                                            const PriorMatrix& prior) {
    const int p = static_cast<int>(data.p());
    if (static_cast<int>(order.sequence.size()) != p || prior.p() != p)
        throw data_error("estimate_weights: dimension mismatch");
    const Eigen::Index n = data.n();
    const Eigen::MatrixXd centered = data.values.rowwise() - data.values.colwise().mean();

    WeightEstimate out{WeightedDag{Eigen::MatrixXd::Zero(p, p), data.labels},
                       Eigen::MatrixXd::Zero(p, p),
                       Eigen::VectorXd::Zero(p),
                       {}};

    for (int k = 0; k < p; ++k) {
        const int j = order.sequence[static_cast<std::size_t>(k)];
        std::vector<int> parents;
        for (int i = 0; i < p; ++i)
            if (i != j && order.position[i] < k && prior.values(i, j) != 0) parents.push_back(i);
        if (parents.empty()) continue;

        const Eigen::VectorXd y = centered.col(j);
        while (!parents.empty()) {
            const int m = static_cast<int>(parents.size());
            Eigen::MatrixXd design(n, m);
            for (int c = 0; c < m; ++c) design.col(c) = centered.col(parents[static_cast<std::size_t>(c)]);

            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
            if (qr.rank() == m) {
                const Eigen::VectorXd coef = qr.solve(y);
                const Eigen::VectorXd resid = y - design * coef;
                const double dof = static_cast<double>(n - m - 1);
                out.dof[j] = dof;
                Eigen::VectorXd se = Eigen::VectorXd::Zero(m);
                if (dof >= 1.0) {
                    const double sigma2 = resid.squaredNorm() / dof;
                    const Eigen::MatrixXd xtx_inv =
                        (design.transpose() * design).ldlt().solve(Eigen::MatrixXd::Identity(m, m));
                    se = (sigma2 * xtx_inv.diagonal().array()).max(0.0).sqrt();
                }
                for (int c = 0; c < m; ++c) {
                    const int i = parents[static_cast<std::size_t>(c)];
                    out.dag.weights(i, j) = coef[c];
                    out.tstats(i, j) = se[c] > 0.0 ? coef[c] / se[c] : 0.0;
                }
                break;
            }
            // Rank-deficient design: drop the parent with the weakest marginal
            // correlation and retry.
            int drop = 0;
            double weakest = std::numeric_limits<double>::infinity();
            for (int c = 0; c < m; ++c) {
                const double r = std::abs(
                    pearson(data.values.col(parents[static_cast<std::size_t>(c)]), data.values.col(j)));
                if (r < weakest) {
                    weakest = r;
                    drop = c;
                }
            }
            out.warnings.push_back("rank-deficient regression for '" +
                                   data.labels[static_cast<std::size_t>(j)] + "': dropped parent '" +
                                   data.labels[static_cast<std::size_t>(parents[static_cast<std::size_t>(drop)])] +
                                   "'");
            parents.erase(parents.begin() + drop);
        }
    }
    return out;
}

} // namespace detail

/// Support-constrained least squares: variable j regresses on the variables
/// that precede it in the order and are open in the prior; all other
/// coefficients are exactly zero.
inline WeightedDag estimate_weights(const DataMatrix& data, const CausalOrder& order,
                                    const PriorMatrix& prior,
                                    std::vector<std::string>* warnings = nullptr) {
    auto full = detail::estimate_weights_full(data, order, prior);
    if (warnings)
        warnings->insert(warnings->end(), full.warnings.begin(), full.warnings.end());
    return std::move(full.dag);
}

struct FitConfig {
    double alpha1 = 0.05; // screening level
    double alpha2 = 0.2;  // edge-test FDR level
    // Per-weight significance filter (BH-corrected t-tests at the level below).
    // Without it every prior-open predecessor pair keeps a sample-noise
    // coefficient, and the broad prior would leak straight into the support.
    bool weight_filter = true;
    double weight_filter_alpha = 0.05;
};

struct FitDiagnostics {
    std::size_t prior_edge_count = 0;
    std::size_t degenerate_pairs = 0;
    std::vector<std::string> warnings;
    double seconds_transform = 0.0;
    double seconds_prior = 0.0;
    double seconds_order = 0.0;
    double seconds_weights = 0.0;
};

struct FitResult {
    WeightedDag bhat;
    CausalOrder order;
    PriorMatrix prior;
    EdgeSet prior_edges;
    FitDiagnostics diagnostics;
};

/// Full pipeline: Gaussianize for prior estimation only, screen and test
/// partial correlations into a prior, then order and estimate weights on the
/// original (non-Gaussianized) data.
inline FitResult fit_psi_lingam(const DataMatrix& data, const FitConfig& config = {}) {
    using clock = std::chrono::steady_clock;
    const auto seconds_since = [](clock::time_point start) {
        return std::chrono::duration<double>(clock::now() - start).count();
    };

    FitDiagnostics diag;

    auto t0 = clock::now();
    const DataMatrix transformed = nonparanormal_transform(data);
    diag.seconds_transform = seconds_since(t0);

    t0 = clock::now();
    const auto neighborhoods = correlation_screen(transformed, config.alpha1);
    const PsiScores scores = psi_scores(transformed, neighborhoods);
    EdgeSet edges = psi_edge_test(scores, data.n(), config.alpha2);
    PriorMatrix prior = build_prior(edges, static_cast<int>(data.p()));
    for (auto flag : scores.degenerate) diag.degenerate_pairs += flag;
    diag.prior_edge_count = edges.size();
    if (diag.degenerate_pairs > 0)
        diag.warnings.push_back(std::to_string(diag.degenerate_pairs) +
                                " pair(s) had degenerate conditioning sets and scored 0");
    diag.seconds_prior = seconds_since(t0);

    t0 = clock::now();
    CausalOrder order = find_causal_order(data, prior);
    diag.seconds_order = seconds_since(t0);

    t0 = clock::now();
    auto estimate = detail::estimate_weights_full(data, order, prior);
    diag.warnings.insert(diag.warnings.end(), estimate.warnings.begin(), estimate.warnings.end());
    WeightedDag bhat = std::move(estimate.dag);

    if (config.weight_filter) {
        const int p = static_cast<int>(data.p());
        std::vector<std::pair<int, int>> entries;
        std::vector<double> pvalues;
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) {
                if (bhat.weights(i, j) == 0.0) continue;
                if (estimate.dof[j] < 1.0) continue; // untestable: keep the weight
                entries.emplace_back(i, j);
                pvalues.push_back(student_t_pvalue(estimate.tstats(i, j), estimate.dof[j]));
            }
        }
        const auto reject = benjamini_hochberg(pvalues, config.weight_filter_alpha);
        for (std::size_t k = 0; k < entries.size(); ++k)
            if (!reject[k]) bhat.weights(entries[k].first, entries[k].second) = 0.0;
    }
    diag.seconds_weights = seconds_since(t0);

    return FitResult{std::move(bhat), std::move(order), std::move(prior), std::move(edges), std::move(diag)};
}

} // namespace psilingam
