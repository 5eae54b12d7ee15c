#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "psilingam/errors.hpp"
#include "psilingam/graph.hpp"

namespace psilingam {

struct NetworkStats {
    double density = 0.0;
    double transitivity = 0.0;
    double global_efficiency = 0.0;
    std::vector<int> in_degree;
    std::vector<int> out_degree;
    std::vector<int> sum_degree;
};

enum class HubKind { In, Out, Sum };

struct Hub {
    int node = 0;
    int degree = 0;
};

struct HubReport {
    std::vector<Hub> in_hubs;
    std::vector<Hub> out_hubs;
    std::vector<Hub> sum_hubs; // high total degree, not already an in- or out-hub
};

namespace detail {

inline void check_adjacency(const Adjacency& adj) {
    if (adj.rows() != adj.cols()) throw data_error("adjacency must be square");
    for (Eigen::Index v = 0; v < adj.rows(); ++v)
        if (adj(v, v) != 0) throw data_error("adjacency diagonal must be zero");
}

/// Directed unit-length shortest-path distances from src (-1 = unreachable).
inline std::vector<int> bfs_distances(const Adjacency& adj, int src) {
    const int p = static_cast<int>(adj.rows());
    std::vector<int> dist(p, -1);
    dist[src] = 0;
    std::deque<int> queue{src};
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v = 0; v < p; ++v) {
            if (v != u && adj(u, v) != 0 && dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

} // namespace detail

/// Density, degree vectors, transitivity on the symmetrized graph
/// (3 * triangles / connected triples) and directed global efficiency
/// (mean inverse shortest path length over ordered pairs, 1/inf = 0).
inline NetworkStats network_stats(const Adjacency& adj) {
    detail::check_adjacency(adj);
    const int p = static_cast<int>(adj.rows());
    NetworkStats stats;
    stats.in_degree.assign(p, 0);
    stats.out_degree.assign(p, 0);
    stats.sum_degree.assign(p, 0);

    int edges = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (i != j && adj(i, j) != 0) {
                ++edges;
                ++stats.out_degree[i];
                ++stats.in_degree[j];
            }
        }
    }
    for (int v = 0; v < p; ++v) stats.sum_degree[v] = stats.in_degree[v] + stats.out_degree[v];
    stats.density = static_cast<double>(edges) / (static_cast<double>(p) * (p - 1));

    Adjacency und(p, p);
    und.setZero();
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (i != j && (adj(i, j) != 0 || adj(j, i) != 0)) und(i, j) = 1;

    long long triangles = 0, triples = 0;
    for (int v = 0; v < p; ++v) {
        int deg = 0;
        for (int j = 0; j < p; ++j) deg += und(v, j);
        triples += static_cast<long long>(deg) * (deg - 1) / 2;
    }
    for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b)
            for (int c = b + 1; c < p; ++c)
                if (und(a, b) != 0 && und(b, c) != 0 && und(a, c) != 0) ++triangles;
    stats.transitivity = triples == 0 ? 0.0 : 3.0 * static_cast<double>(triangles) / static_cast<double>(triples);

    double inv_sum = 0.0;
    for (int src = 0; src < p; ++src) {
        const auto dist = detail::bfs_distances(adj, src);
        for (int dst = 0; dst < p; ++dst)
            if (dst != src && dist[dst] > 0) inv_sum += 1.0 / static_cast<double>(dist[dst]);
    }
    stats.global_efficiency = inv_sum / (static_cast<double>(p) * (p - 1));
    return stats;
}

namespace detail {

inline std::vector<Hub> degree_hubs(const std::vector<int>& degrees) {
    const double n = static_cast<double>(degrees.size());
    double mean = 0.0;
    for (int d : degrees) mean += d;
    mean /= n;
    double ss = 0.0;
    for (int d : degrees) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    std::vector<Hub> hubs;
    if (!(sd > 0.0)) return hubs; // all degrees equal: no hubs
    const double threshold = mean + 2.0 * sd;
    for (std::size_t v = 0; v < degrees.size(); ++v)
        if (static_cast<double>(degrees[v]) >= threshold)
            hubs.push_back(Hub{static_cast<int>(v), degrees[v]});
    return hubs;
}

} // namespace detail

/// Hub detection: degree at least two sample standard deviations above the
/// mean, separately for in-, out- and sum-degrees. Sum-hubs exclude nodes
/// already reported as in- or out-hubs.
inline HubReport detect_hubs(const Adjacency& adj) {
    detail::check_adjacency(adj);
    if (adj.rows() < 3) throw data_error("detect_hubs: need at least 3 nodes");
    const NetworkStats stats = network_stats(adj);

    HubReport report;
    report.in_hubs = detail::degree_hubs(stats.in_degree);
    report.out_hubs = detail::degree_hubs(stats.out_degree);

    std::vector<bool> taken(static_cast<std::size_t>(adj.rows()), false);
    for (const auto& hub : report.in_hubs) taken[static_cast<std::size_t>(hub.node)] = true;
    for (const auto& hub : report.out_hubs) taken[static_cast<std::size_t>(hub.node)] = true;
    for (const auto& hub : detail::degree_hubs(stats.sum_degree))
        if (!taken[static_cast<std::size_t>(hub.node)]) report.sum_hubs.push_back(hub);
    return report;
}

} // namespace psilingam
