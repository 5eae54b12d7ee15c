#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psilingam/errors.hpp"
#include "psilingam/stats.hpp"

namespace psilingam {

/// n x p observation matrix, rows = samples, columns = variables.
/// Invariants: n >= 3, p >= 2, all entries finite, every column has
/// strictly positive sample variance.
struct DataMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> labels;

    Eigen::Index n() const { return values.rows(); }
    Eigen::Index p() const { return values.cols(); }
};

inline std::vector<std::string> default_labels(Eigen::Index p) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) labels.push_back("V" + std::to_string(j + 1));
    return labels;
}

/// Validates the DataMatrix invariants, naming the offending column on failure.
inline DataMatrix make_data_matrix(Eigen::MatrixXd values, std::vector<std::string> labels = {}) {
    const Eigen::Index n = values.rows(), p = values.cols();
    if (n < 3) throw data_error("data matrix needs n >= 3 samples, got " + std::to_string(n));
    if (p < 2) throw data_error("data matrix needs p >= 2 variables, got " + std::to_string(p));
    if (labels.empty()) labels = default_labels(p);
    if (static_cast<Eigen::Index>(labels.size()) != p)
        throw data_error("label count does not match column count");
    for (Eigen::Index j = 0; j < p; ++j) {
        const auto col = values.col(j);
        if (!col.allFinite())
            throw data_error("non-finite value in column '" + labels[static_cast<std::size_t>(j)] + "'");
        if (!(sample_variance(col) > 0.0))
            throw data_error("constant column '" + labels[static_cast<std::size_t>(j)] + "'");
    }
    return DataMatrix{std::move(values), std::move(labels)};
}

namespace detail {

inline std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, delim)) cells.push_back(cell);
    if (!line.empty() && line.back() == delim) cells.push_back("");
    return cells;
}

inline bool parse_cell(const std::string& cell, double& out) {
    std::size_t pos = 0;
    try {
        out = std::stod(cell, &pos);
    } catch (const std::exception&) {
        return false;
    }
    while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
    return pos == cell.size();
}

inline std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

} // namespace detail

/// Loads a comma- or tab-separated numeric matrix (delimiter auto-detected from
/// the first line, comma tried first). Header labels used when has_header is set.
inline DataMatrix load_matrix(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        line = detail::strip_cr(line);
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw data_error("'" + path + "' is empty");

    const char delim = lines.front().find(',') != std::string::npos ? ',' : '\t';

    std::size_t first_data = 0;
    std::vector<std::string> labels;
    if (has_header) {
        labels = detail::split_line(lines.front(), delim);
        first_data = 1;
        if (lines.size() == 1) throw data_error("'" + path + "' has a header but no data rows");
    }

    const std::size_t p = detail::split_line(lines[first_data], delim).size();
    Eigen::MatrixXd values(static_cast<Eigen::Index>(lines.size() - first_data),
                           static_cast<Eigen::Index>(p));
    for (std::size_t r = first_data; r < lines.size(); ++r) {
        const auto cells = detail::split_line(lines[r], delim);
        const std::size_t row = r - first_data;
        if (cells.size() != p)
            throw data_error("row " + std::to_string(row + 1) + " has " + std::to_string(cells.size()) +
                             " cells, expected " + std::to_string(p));
        for (std::size_t c = 0; c < p; ++c) {
            double v = 0.0;
            if (!detail::parse_cell(cells[c], v) || !std::isfinite(v))
                throw data_error("non-numeric cell at row " + std::to_string(row + 1) + ", column " +
                                 std::to_string(c + 1));
            values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return make_data_matrix(std::move(values), std::move(labels));
}

/// Writes the matrix as CSV with a header row, full double precision.
inline void save_matrix(const DataMatrix& data, std::ostream& out) {
    out.precision(17);
    for (std::size_t j = 0; j < data.labels.size(); ++j) {
        if (j) out << ',';
        out << data.labels[j];
    }
    out << '\n';
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        for (Eigen::Index j = 0; j < data.p(); ++j) {
            if (j) out << ',';
            out << data.values(i, j);
        }
        out << '\n';
    }
}

/// Columns rescaled to sample mean 0 and sample sd 1 (n-1 denominator).
inline DataMatrix zscore_columns(const DataMatrix& data) {
    Eigen::MatrixXd out(data.n(), data.p());
    for (Eigen::Index j = 0; j < data.p(); ++j) out.col(j) = standardize(data.values.col(j));
    return DataMatrix{std::move(out), data.labels};
}

/// Critical values of the size-corrected A^2 statistic for normality with
/// estimated mean and variance.
inline constexpr double kAndersonDarlingCrit05 = 0.752;
inline constexpr double kAndersonDarlingCrit01 = 1.035;

/// Per-column Anderson-Darling statistic against a normal with estimated
/// mean/variance, with the small-sample correction A^2 * (1 + 4/n - 25/n^2).
/// A column is non-Gaussian at the 5% level when the value exceeds 0.752.
inline std::vector<double> anderson_darling(const DataMatrix& data) {
    const Eigen::Index n = data.n();
    if (n < 8) throw data_error("insufficient samples for AD test (n >= 8 required)");

    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(data.p()));
    const double dn = static_cast<double>(n);
    for (Eigen::Index j = 0; j < data.p(); ++j) {
        const Eigen::VectorXd z = standardize(data.values.col(j));
        std::vector<double> sorted(z.data(), z.data() + z.size());
        std::sort(sorted.begin(), sorted.end());
        double sum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double lo = std::log(normal_cdf(sorted[static_cast<std::size_t>(i)]));
            const double hi = std::log(normal_sf(sorted[static_cast<std::size_t>(n - 1 - i)]));
            sum += (2.0 * static_cast<double>(i) + 1.0) * (lo + hi);
        }
        const double a2 = -dn - sum / dn;
        stats.push_back(a2 * (1.0 + 4.0 / dn - 25.0 / (dn * dn)));
    }
    return stats;
}

inline std::vector<bool> anderson_darling_flags(const std::vector<double>& stats,
                                                double critical = kAndersonDarlingCrit05) {
    std::vector<bool> flags(stats.size());
    for (std::size_t j = 0; j < stats.size(); ++j) flags[j] = stats[j] > critical;
    return flags;
}

} // namespace psilingam
