#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "psilingam/errors.hpp"

namespace psilingam {

using Adjacency = Eigen::MatrixXi; // (i,j) = 1 means edge i -> j

/// Kahn topological sort of a binary adjacency. Empty when the graph has a cycle.
inline std::optional<std::vector<int>> topological_order(const Adjacency& adj) {
    const int p = static_cast<int>(adj.rows());
    std::vector<int> indeg(p, 0);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < p; ++i)
            if (i != j && adj(i, j) != 0) ++indeg[j];

    std::vector<int> order;
    order.reserve(p);
    std::vector<int> ready;
    for (int j = p - 1; j >= 0; --j)
        if (indeg[j] == 0) ready.push_back(j);
    while (!ready.empty()) {
        const int u = ready.back();
        ready.pop_back();
        order.push_back(u);
        for (int j = p - 1; j >= 0; --j)
            if (j != u && adj(u, j) != 0 && --indeg[j] == 0) ready.push_back(j);
    }
    if (static_cast<int>(order.size()) != p) return std::nullopt;
    return order;
}

inline bool is_acyclic(const Adjacency& adj) { return topological_order(adj).has_value(); }

inline int edge_count(const Adjacency& adj) {
    int count = 0;
    for (int i = 0; i < adj.rows(); ++i)
        for (int j = 0; j < adj.cols(); ++j)
            if (i != j && adj(i, j) != 0) ++count;
    return count;
}

} // namespace psilingam
