#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psilingam/errors.hpp"
#include "psilingam/lingam.hpp"
#include "psilingam/stats.hpp"

namespace psilingam {

/// Per-subject weighted adjacency matrices of one group.
struct SubjectStack {
    std::vector<Eigen::MatrixXd> subjects;
    std::string label;

    int p() const { return subjects.empty() ? 0 : static_cast<int>(subjects.front().rows()); }
    int size() const { return static_cast<int>(subjects.size()); }
};

inline SubjectStack make_subject_stack(std::vector<Eigen::MatrixXd> subjects, std::string label) {
    if (subjects.size() < 2) throw data_error("subject stack needs at least 2 subjects");
    const Eigen::Index p = subjects.front().rows();
    for (std::size_t s = 0; s < subjects.size(); ++s) {
        if (subjects[s].rows() != p || subjects[s].cols() != p)
            throw data_error("subject " + std::to_string(s + 1) + " has mismatched dimensions");
        make_weighted_dag(subjects[s]); // zero diagonal, finite, acyclic support
    }
    return SubjectStack{std::move(subjects), std::move(label)};
}

struct GroupEdge {
    int i = 0;
    int j = 0;
    double mean_weight = 0.0;
    double p_value = 1.0;
};

/// Group-level edges: per ordered pair a one-sample t-test of the subject
/// weights against 0, Benjamini-Hochberg across all p(p-1) pairs at alpha,
/// and a floor on the |mean weight|. Zero-variance pairs are significant when
/// their common weight is nonzero and dropped otherwise.
inline std::vector<GroupEdge> group_edges(const SubjectStack& stack, double alpha, double weight_floor,
                                          std::vector<std::string>* warnings = nullptr) {
    if (stack.size() < 3) throw data_error("group_edges: need at least 3 subjects");
    const int p = stack.p();
    const int k = stack.size();

    std::vector<GroupEdge> candidates;
    std::vector<double> pvalues;
    candidates.reserve(static_cast<std::size_t>(p) * (p - 1));
    Eigen::VectorXd weights(k);
    int degenerate = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (i == j) continue;
            for (int s = 0; s < k; ++s) weights[s] = stack.subjects[static_cast<std::size_t>(s)](i, j);
            const double m = weights.mean();
            const double sd = sample_sd(weights);
            double pv;
            if (sd > 0.0) {
                const double t = m / (sd / std::sqrt(static_cast<double>(k)));
                pv = student_t_pvalue(t, static_cast<double>(k - 1));
            } else {
                ++degenerate;
                pv = (m != 0.0) ? 0.0 : 1.0;
            }
            candidates.push_back(GroupEdge{i, j, m, pv});
            pvalues.push_back(pv);
        }
    }
    if (degenerate > 0 && warnings)
        warnings->push_back(std::to_string(degenerate) + " pair(s) had zero cross-subject variance");

    const auto reject = benjamini_hochberg(pvalues, alpha);
    std::vector<GroupEdge> selected;
    for (std::size_t idx = 0; idx < candidates.size(); ++idx)
        if (reject[idx] && std::abs(candidates[idx].mean_weight) > weight_floor)
            selected.push_back(candidates[idx]);
    return selected;
}

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p_value = 1.0;
};

/// Welch two-sample t-test with Welch-Satterthwaite degrees of freedom.
inline WelchResult welch_test(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() < 2 || b.size() < 2) throw data_error("welch_test: each group needs >= 2 values");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double va = sample_variance(a) / na, vb = sample_variance(b) / nb;
    const double diff = a.mean() - b.mean();
    if (va + vb == 0.0) {
        if (diff == 0.0) return WelchResult{0.0, na + nb - 2.0, 1.0};
        const double inf = std::numeric_limits<double>::infinity();
        return WelchResult{diff > 0.0 ? inf : -inf, na + nb - 2.0, 0.0};
    }
    const double t = diff / std::sqrt(va + vb);
    const double df = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    return WelchResult{t, df, student_t_pvalue(t, df)};
}

/// Cohen's d with pooled standard deviation. Zero pooled sd yields 0 for equal
/// means and a signed-infinity sentinel otherwise.
inline double cohens_d(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                       std::vector<std::string>* warnings = nullptr) {
    if (a.size() < 2 || b.size() < 2) throw data_error("cohens_d: each group needs >= 2 values");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double diff = a.mean() - b.mean();
    const double pooled =
        std::sqrt(((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) / (na + nb - 2.0));
    if (pooled == 0.0) {
        if (diff == 0.0) return 0.0;
        if (warnings) warnings->push_back("zero pooled sd with unequal means");
        return diff > 0.0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
    }
    return diff / pooled;
}

struct EdgeDiff {
    int i = 0;
    int j = 0;
    double t = 0.0;
    double p_value = 1.0;
    double d = 0.0;
    double mean_a = 0.0;
    double mean_b = 0.0;
};

/// Per-edge between-group statistics over all p(p-1) ordered pairs (row-major).
struct GroupDiffReport {
    std::string group_a;
    std::string group_b;
    std::vector<EdgeDiff> records;
    std::vector<std::string> warnings;
};

inline GroupDiffReport build_group_report(const SubjectStack& group_a, const SubjectStack& group_b) {
    if (group_a.p() != group_b.p()) throw data_error("group stacks have different dimensions");
    const int p = group_a.p();
    GroupDiffReport report;
    report.group_a = group_a.label;
    report.group_b = group_b.label;
    report.records.reserve(static_cast<std::size_t>(p) * (p - 1));

    Eigen::VectorXd wa(group_a.size()), wb(group_b.size());
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (i == j) continue;
            for (int s = 0; s < group_a.size(); ++s)
                wa[s] = group_a.subjects[static_cast<std::size_t>(s)](i, j);
            for (int s = 0; s < group_b.size(); ++s)
                wb[s] = group_b.subjects[static_cast<std::size_t>(s)](i, j);
            const WelchResult welch = welch_test(wa, wb);
            EdgeDiff rec;
            rec.i = i;
            rec.j = j;
            rec.t = welch.t;
            rec.p_value = welch.p_value;
            rec.d = cohens_d(wa, wb, &report.warnings);
            rec.mean_a = wa.mean();
            rec.mean_b = wb.mean();
            report.records.push_back(rec);
        }
    }
    return report;
}

/// Feature selection: edges with Welch p <= alpha and |d| > d_floor, sorted by
/// |d| descending (ties by pair index).
inline std::vector<EdgeDiff> select_features(const GroupDiffReport& report, double d_floor, double alpha) {
    std::vector<EdgeDiff> selected;
    for (const auto& rec : report.records)
        if (rec.p_value <= alpha && std::abs(rec.d) > d_floor) selected.push_back(rec);
    std::sort(selected.begin(), selected.end(), [](const EdgeDiff& a, const EdgeDiff& b) {
        const double da = std::abs(a.d), db = std::abs(b.d);
        if (da != db) return da > db;
        return std::make_pair(a.i, a.j) < std::make_pair(b.i, b.j);
    });
    return selected;
}

} // namespace psilingam
