#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psilingam/data_matrix.hpp"
#include "psilingam/errors.hpp"
#include "psilingam/graph.hpp"
#include "psilingam/lingam.hpp"
#include "psilingam/prior.hpp"

namespace psilingam {

/// Writes via a temp file and rename so a failed run never leaves a truncated
/// artifact behind.
inline void atomic_write(const std::filesystem::path& path,
                         const std::function<void(std::ostream&)>& producer) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw data_error("cannot write '" + tmp.string() + "'");
        producer(out);
        out.flush();
        if (!out) throw data_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

inline void write_dense(std::ostream& out, const Eigen::MatrixXd& m) {
    out.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

inline void write_dense(std::ostream& out, const Eigen::MatrixXi& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

/// Square numeric CSV without header (weights, adjacencies, priors).
inline Eigen::MatrixXd load_dense(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        const char delim = line.find(',') != std::string::npos ? ',' : '\t';
        const auto cells = detail::split_line(line, delim);
        std::vector<double> row;
        row.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            double v = 0.0;
            if (!detail::parse_cell(cells[c], v))
                throw data_error("non-numeric cell in '" + path + "' at row " +
                                 std::to_string(rows.size() + 1) + ", column " + std::to_string(c + 1));
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw data_error("ragged rows in '" + path + "'");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw data_error("'" + path + "' is empty");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

/// Edge list "src \t dst \t weight" sorted by (src, dst) index, label names.
inline void write_edge_list(std::ostream& out, const WeightedDag& dag) {
    out.precision(17);
    out << "src\tdst\tweight\n";
    for (Eigen::Index i = 0; i < dag.p(); ++i)
        for (Eigen::Index j = 0; j < dag.p(); ++j)
            if (i != j && dag.weights(i, j) != 0.0)
                out << dag.labels[static_cast<std::size_t>(i)] << '\t'
                    << dag.labels[static_cast<std::size_t>(j)] << '\t' << dag.weights(i, j) << '\n';
}

inline void write_edge_set(std::ostream& out, const EdgeSet& edges,
                           const std::vector<std::string>& labels) {
    for (const auto& [i, j] : edges.pairs)
        out << labels[static_cast<std::size_t>(i)] << '\t' << labels[static_cast<std::size_t>(j)] << '\n';
}

} // namespace psilingam
