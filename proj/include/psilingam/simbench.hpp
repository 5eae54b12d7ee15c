#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psilingam/data_matrix.hpp"
#include "psilingam/errors.hpp"
#include "psilingam/graph.hpp"
#include "psilingam/lingam.hpp"
#include "psilingam/metrics.hpp"
#include "psilingam/rng.hpp"
#include "psilingam/stats.hpp"

namespace psilingam {

enum class NoiseKind { Exp, Chisq };

inline std::string to_string(NoiseKind kind) { return kind == NoiseKind::Exp ? "exp" : "chisq"; }

struct BenchmarkConfig {
    int p = 50;
    double d = 1.0; // expected in-edges per node; edge probability d/(p-1)
    int n = 100;
    NoiseKind noise = NoiseKind::Exp;
    int reps = 10;
    std::uint64_t seed = 0;
    FitConfig fit;
};

inline void validate(const BenchmarkConfig& config) {
    if (config.p < 2) throw data_error("benchmark: p must be >= 2");
    if (config.n < 3) throw data_error("benchmark: n must be >= 3");
    if (config.reps < 1) throw data_error("benchmark: reps must be >= 1");
    if (config.d < 0.0 || config.d > static_cast<double>(config.p - 1))
        throw data_error("benchmark: d must lie in [0, p-1]");
}

/// Random DAG: edges i -> j for i < j with probability d/(p-1), then a seeded
/// node relabeling so the topological order is not the index order.
inline Adjacency random_dag(int p, double d, std::uint64_t seed) {
    if (p < 2) throw data_error("random_dag: p must be >= 2");
    if (d < 0.0 || d > static_cast<double>(p - 1)) throw data_error("random_dag: d must lie in [0, p-1]");
    Rng rng(seed);
    const double prob = d / static_cast<double>(p - 1);
    Adjacency upper(p, p);
    upper.setZero();
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (rng.bernoulli(prob)) upper(i, j) = 1;
    const std::vector<int> relabel = rng.permutation(p);
    Adjacency adj(p, p);
    adj.setZero();
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (upper(i, j) != 0) adj(relabel[i], relabel[j]) = 1;
    return adj;
}

/// Edge weights uniform on (-0.8,-0.3) U (0.3,0.8): fair-coin sign, uniform
/// magnitude. Non-edges stay exactly zero.
inline WeightedDag assign_weights(const Adjacency& dag, std::uint64_t seed) {
    if (!is_acyclic(dag)) throw data_error("assign_weights: adjacency has a cycle");
    const int p = static_cast<int>(dag.rows());
    Rng rng(seed);
    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (i == j || dag(i, j) == 0) continue;
            const double magnitude = rng.uniform(0.3, 0.8);
            weights(i, j) = rng.coin() ? magnitude : -magnitude;
        }
    }
    return WeightedDag{std::move(weights), default_labels(p)};
}

/// i.i.d. noise matrix: exp(1) or central chi-squared with 1 df, sampled by
/// inverse transform so output depends only on the seed.
inline Eigen::MatrixXd sample_noise(NoiseKind kind, int n, int p, std::uint64_t seed) {
    if (n < 1 || p < 1) throw data_error("sample_noise: n and p must be >= 1");
    Rng rng(seed);
    Eigen::MatrixXd noise(n, p);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) {
            const double u = rng.uniform01();
            if (kind == NoiseKind::Exp) {
                noise(i, j) = -std::log1p(-u);
            } else {
                const double z = normal_quantile(u);
                noise(i, j) = z * z;
            }
        }
    }
    return noise;
}

/// Exact SEM solve x = B^T x + eps by substitution in topological order.
inline DataMatrix generate_data(const WeightedDag& dag, const Eigen::MatrixXd& noise) {
    const int p = static_cast<int>(dag.p());
    if (noise.cols() != p) throw data_error("generate_data: noise width does not match dag");
    const auto topo = topological_order(support(dag));
    if (!topo) throw data_error("generate_data: cyclic support");

    Eigen::MatrixXd values = noise;
    for (int j : *topo)
        for (int i = 0; i < p; ++i)
            if (i != j && dag.weights(i, j) != 0.0) values.col(j) += dag.weights(i, j) * values.col(i);
    return DataMatrix{std::move(values), dag.labels};
}

struct RepResult {
    int rep = 0;
    std::uint64_t seed = 0;
    MetricsReport metrics;
};

struct BenchmarkReport {
    BenchmarkConfig config;
    std::vector<RepResult> reps;
    double mean_tpr = 0.0, sd_tpr = 0.0;
    double mean_fdr = 0.0, sd_fdr = 0.0;
    double mean_shd = 0.0, sd_shd = 0.0;
    double mean_seconds = 0.0;
};

namespace detail {

inline std::pair<double, double> mean_sd(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

} // namespace detail

/// One simulation draw: DAG, weights, noise, data. Component seeds are derived
/// from the rep seed (streams 0, 1, 2).
struct SimulatedInstance {
    WeightedDag truth;
    DataMatrix data;
};

inline SimulatedInstance simulate_instance(int p, double d, int n, NoiseKind noise, std::uint64_t seed) {
    const Adjacency dag = random_dag(p, d, derive_seed(seed, 0));
    WeightedDag truth = assign_weights(dag, derive_seed(seed, 1));
    DataMatrix data = generate_data(truth, sample_noise(noise, n, p, derive_seed(seed, 2)));
    return SimulatedInstance{std::move(truth), std::move(data)};
}

/// Repeated-trial benchmark: per rep a fresh DAG/weights/noise draw, a full
/// fit, and TPR/FDR/SHD of the tau = 0 thresholded estimate against the truth.
inline BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
    validate(config);
    BenchmarkReport report;
    report.config = config;
    report.reps.reserve(static_cast<std::size_t>(config.reps));

    std::vector<double> tprs, fdrs, shds, times;
    for (int rep = 0; rep < config.reps; ++rep) {
        const std::uint64_t rep_seed = derive_seed(config.seed, static_cast<std::uint64_t>(rep));
        try {
            const auto instance =
                simulate_instance(config.p, config.d, config.n, config.noise, rep_seed);
            const auto start = std::chrono::steady_clock::now();
            const FitResult fit = fit_psi_lingam(instance.data, config.fit);
            const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

            const Adjacency est = threshold_graph(fit.bhat, 0.0);
            const Adjacency truth = support(instance.truth);
            MetricsReport metrics;
            metrics.tpr = tpr(est, truth);
            metrics.fdr = fdr(est, truth);
            metrics.shd = shd(est, truth);
            metrics.seed = rep_seed;
            metrics.seconds = seconds;
            report.reps.push_back(RepResult{rep, rep_seed, metrics});

            tprs.push_back(metrics.tpr);
            fdrs.push_back(metrics.fdr);
            shds.push_back(static_cast<double>(metrics.shd));
            times.push_back(seconds);
        } catch (const std::exception& e) {
            throw numerical_error("benchmark rep " + std::to_string(rep) + " (seed " +
                                  std::to_string(rep_seed) + ") failed: " + e.what());
        }
    }

    std::tie(report.mean_tpr, report.sd_tpr) = detail::mean_sd(tprs);
    std::tie(report.mean_fdr, report.sd_fdr) = detail::mean_sd(fdrs);
    std::tie(report.mean_shd, report.sd_shd) = detail::mean_sd(shds);
    report.mean_seconds = detail::mean_sd(times).first;
    return report;
}

} // namespace psilingam
