// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code = number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <deque>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "psilingam/psilingam.hpp"

using namespace psilingam;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << ". " << name << ": " << detail << std::endl;
    if (!pass) ++failures;
}

std::string fmt(double x, int precision = 4) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(precision) << x;
    return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Large-n consistency: p=10, d=1, n=2000, Exp, 10 reps.
void criterion_consistency() {
    const auto start = clock_type::now();
    BenchmarkConfig config;
    config.p = 10;
    config.d = 1.0;
    config.n = 2000;
    config.noise = NoiseKind::Exp;
    config.reps = 10;
    config.seed = 20260101;
    const BenchmarkReport rep = run_benchmark(config);
    const double elapsed = seconds_since(start);
    const bool pass = rep.mean_tpr >= 0.90 && rep.mean_fdr <= 0.10 && rep.mean_shd <= 2.0 &&
                      elapsed < 120.0;
    report(1, "large-n consistency", pass,
           "mean_tpr=" + fmt(rep.mean_tpr) + " (>=0.90), mean_fdr=" + fmt(rep.mean_fdr) +
               " (<=0.10), mean_shd=" + fmt(rep.mean_shd) + " (<=2), " + fmt(elapsed, 1) + "s (<120s)");
}

// ---------------------------------------------------------------------------
// 2. High-dimensional FDR control: p=200, d=1, n=100, Exp, 10 reps.
void criterion_high_dimensional() {
    const auto start = clock_type::now();
    BenchmarkConfig config;
    config.p = 200;
    config.d = 1.0;
    config.n = 100;
    config.noise = NoiseKind::Exp;
    config.reps = 10;
    config.seed = 20260102;
    const BenchmarkReport rep = run_benchmark(config);
    const double elapsed = seconds_since(start);
    const bool pass = rep.mean_fdr <= 0.30 && elapsed < 1800.0;
    report(2, "high-dimensional FDR control", pass,
           "mean_fdr=" + fmt(rep.mean_fdr) + " (<=0.30), mean_tpr=" + fmt(rep.mean_tpr) + ", " +
               fmt(elapsed, 1) + "s (<1800s)");
}

// ---------------------------------------------------------------------------
// 3. Bivariate direction recovery: weight 0.8, exp noises, n=5000, 100 seeds.
void criterion_bivariate() {
    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(2, 2);
    weights(0, 1) = 0.8;
    const WeightedDag truth{weights, default_labels(2)};
    const Adjacency truth_adj = support(truth);

    int correct = 0;
    for (int seed = 0; seed < 100; ++seed) {
        const Eigen::MatrixXd noise =
            sample_noise(NoiseKind::Exp, 5000, 2, derive_seed(333, static_cast<std::uint64_t>(seed)));
        const DataMatrix data = generate_data(truth, noise);
        const FitResult fit = fit_psi_lingam(data);
        if (threshold_graph(fit.bhat, 0.0) == truth_adj) ++correct;
    }
    report(3, "bivariate direction recovery", correct >= 95,
           std::to_string(correct) + "/100 exact recoveries (>=95)");
}

// ---------------------------------------------------------------------------
// 4. Prior superset property: p=50, d=1, n=500, 10 seeds, >=90% skeleton coverage.
void criterion_prior_superset() {
    double coverage_sum = 0.0;
    for (int seed = 0; seed < 10; ++seed) {
        const auto instance =
            simulate_instance(50, 1.0, 500, NoiseKind::Exp, derive_seed(444, static_cast<std::uint64_t>(seed)));
        const DataMatrix transformed = nonparanormal_transform(instance.data);
        const auto neighborhoods = correlation_screen(transformed, 0.05);
        const EdgeSet edges =
            psi_edge_test(psi_scores(transformed, neighborhoods), instance.data.n(), 0.2);

        const Adjacency truth = support(instance.truth);
        int skeleton = 0, covered = 0;
        for (int i = 0; i < 50; ++i) {
            for (int j = i + 1; j < 50; ++j) {
                if (truth(i, j) == 0 && truth(j, i) == 0) continue;
                ++skeleton;
                if (edges.contains(i, j)) ++covered;
            }
        }
        coverage_sum += skeleton == 0 ? 1.0 : static_cast<double>(covered) / skeleton;
    }
    const double mean_coverage = coverage_sum / 10.0;
    report(4, "prior superset property", mean_coverage >= 0.90,
           "mean skeleton coverage=" + fmt(mean_coverage) + " (>=0.90)");
}

// ---------------------------------------------------------------------------
// 5. Speed trend: the prior-screened fit beats the uninformative-prior fit by
//    >= 1.3x median wall-clock on identical data (p=50, d=1, n=100, 5 runs).
void criterion_speed_trend() {
    const auto instance = simulate_instance(50, 1.0, 100, NoiseKind::Exp, 555);
    std::vector<double> screened, uninformative;
    for (int run = 0; run < 5; ++run) {
        auto t0 = clock_type::now();
        const FitResult fit = fit_psi_lingam(instance.data);
        screened.push_back(seconds_since(t0));

        t0 = clock_type::now();
        const PriorMatrix open = uninformative_prior(50);
        const CausalOrder order = find_causal_order(instance.data, open);
        estimate_weights(instance.data, order, open);
        uninformative.push_back(seconds_since(t0));
    }
    std::sort(screened.begin(), screened.end());
    std::sort(uninformative.begin(), uninformative.end());
    const double ratio = uninformative[2] / screened[2];
    report(5, "speed trend", ratio >= 1.3,
           "median screened=" + fmt(screened[2], 3) + "s, uninformative=" + fmt(uninformative[2], 3) +
               "s, ratio=" + fmt(ratio, 2) + " (>=1.3)");
}

// ---------------------------------------------------------------------------
// 6. Metric oracles on every DAG pair over 3 nodes.
namespace oracle {

// pair states: 0 = no edge, 1 = low->high, 2 = high->low over the pairs
// (0,1), (0,2), (1,2); 27 digraph states of which the acyclic ones are kept.
using State = std::array<int, 3>;

Adjacency to_adjacency(const State& s) {
    Adjacency adj = Adjacency::Zero(3, 3);
    const std::array<std::pair<int, int>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};
    for (int k = 0; k < 3; ++k) {
        if (s[static_cast<std::size_t>(k)] == 1) adj(pairs[static_cast<std::size_t>(k)].first, pairs[static_cast<std::size_t>(k)].second) = 1;
        if (s[static_cast<std::size_t>(k)] == 2) adj(pairs[static_cast<std::size_t>(k)].second, pairs[static_cast<std::size_t>(k)].first) = 1;
    }
    return adj;
}

int index_of(const State& s) { return s[0] * 9 + s[1] * 3 + s[2]; }

/// Breadth-first edit distance: one insertion, deletion or flip per move.
int bfs_edit_distance(const State& from, const State& to) {
    std::array<int, 27> dist;
    dist.fill(-1);
    dist[static_cast<std::size_t>(index_of(from))] = 0;
    std::deque<State> queue{from};
    while (!queue.empty()) {
        const State cur = queue.front();
        queue.pop_front();
        if (cur == to) return dist[static_cast<std::size_t>(index_of(cur))];
        for (int k = 0; k < 3; ++k) {
            for (int next = 0; next < 3; ++next) {
                if (next == cur[static_cast<std::size_t>(k)]) continue;
                State moved = cur;
                moved[static_cast<std::size_t>(k)] = next;
                auto& d = dist[static_cast<std::size_t>(index_of(moved))];
                if (d < 0) {
                    d = dist[static_cast<std::size_t>(index_of(cur))] + 1;
                    queue.push_back(moved);
                }
            }
        }
    }
    return -1;
}

std::set<std::pair<int, int>> edge_pairs(const Adjacency& adj) {
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < adj.rows(); ++i)
        for (int j = 0; j < adj.cols(); ++j)
            if (i != j && adj(i, j) != 0) edges.insert({i, j});
    return edges;
}

} // namespace oracle

void criterion_metric_oracles() {
    std::vector<oracle::State> dags;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                const oracle::State s = {a, b, c};
                if (is_acyclic(oracle::to_adjacency(s))) dags.push_back(s);
            }

    int mismatches = 0;
    for (const auto& es : dags) {
        for (const auto& ts : dags) {
            const Adjacency est = oracle::to_adjacency(es);
            const Adjacency truth = oracle::to_adjacency(ts);

            const auto est_edges = oracle::edge_pairs(est);
            const auto truth_edges = oracle::edge_pairs(truth);
            std::vector<std::pair<int, int>> hit;
            std::set_intersection(est_edges.begin(), est_edges.end(), truth_edges.begin(),
                                  truth_edges.end(), std::back_inserter(hit));
            const double want_tpr =
                truth_edges.empty() ? 1.0 : static_cast<double>(hit.size()) / truth_edges.size();
            const double want_fdr =
                est_edges.empty() ? 0.0
                                  : static_cast<double>(est_edges.size() - hit.size()) / est_edges.size();
            const int want_shd = oracle::bfs_edit_distance(es, ts);

            if (tpr(est, truth) != want_tpr || fdr(est, truth) != want_fdr ||
                shd(est, truth) != want_shd)
                ++mismatches;
        }
    }
    const bool pass = dags.size() == 25 && mismatches == 0;
    report(6, "metric oracles (exhaustive 3-node)", pass,
           std::to_string(dags.size()) + " DAGs (=25), " + std::to_string(dags.size() * dags.size()) +
               " pairs, " + std::to_string(mismatches) + " mismatches (=0)");
}

// ---------------------------------------------------------------------------
// 7. Gaussianization: AD pass rate at the 1% level and exact rank preservation.
bool monotone_in_input(const Eigen::VectorXd& in, const Eigen::VectorXd& out) {
    std::vector<int> idx(static_cast<std::size_t>(in.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return in[a] < in[b]; });
    for (std::size_t k = 1; k < idx.size(); ++k) {
        if (out[idx[k]] < out[idx[k - 1]]) return false;
        if (in[idx[k]] == in[idx[k - 1]] && out[idx[k]] != out[idx[k - 1]]) return false;
    }
    return true;
}

void criterion_gaussianization() {
    int passed = 0;
    bool ranks_ok = true;
    for (int seed = 0; seed < 100; ++seed) {
        const Eigen::MatrixXd noise =
            sample_noise(NoiseKind::Exp, 1000, 2, derive_seed(777, static_cast<std::uint64_t>(seed)));
        const DataMatrix data{noise, default_labels(2)};
        const DataMatrix out = nonparanormal_transform(data);
        const auto stats = anderson_darling(out);
        if (stats[0] <= kAndersonDarlingCrit01) ++passed;
        for (int j = 0; j < 2; ++j)
            if (!monotone_in_input(data.values.col(j), out.values.col(j))) ranks_ok = false;
    }
    report(7, "gaussianization", passed >= 95 && ranks_ok,
           std::to_string(passed) + "/100 transformed columns pass AD at 1% (>=95), rank preservation " +
               (ranks_ok ? "exact" : "VIOLATED"));
}

// ---------------------------------------------------------------------------
// 8. Structural invariants across the full simulation grid.
void criterion_invariants() {
    const auto start = clock_type::now();
    int violations = 0;
    int fits = 0;
    std::ostringstream notes;

    for (int p : {50, 100, 200}) {
        for (double d : {1.0, 2.0, 4.0}) {
            for (NoiseKind kind : {NoiseKind::Exp, NoiseKind::Chisq}) {
                for (int rep = 0; rep < 10; ++rep) {
                    const std::uint64_t seed =
                        derive_seed(888, static_cast<std::uint64_t>(p * 1000 + static_cast<int>(d) * 10 +
                                                                    (kind == NoiseKind::Exp ? 0 : 1)) *
                                             100 +
                                             static_cast<std::uint64_t>(rep));
                    const auto instance = simulate_instance(p, d, 100, kind, seed);

                    // SEM identity on the simulated data
                    const Eigen::MatrixXd resid =
                        instance.data.values - instance.data.values * instance.truth.weights;
                    const Eigen::MatrixXd noise = sample_noise(kind, 100, p, derive_seed(seed, 2));
                    if ((resid - noise).cwiseAbs().maxCoeff() > 1e-10) {
                        ++violations;
                        notes << " sem(seed=" << seed << ")";
                    }

                    const FitResult fit = fit_psi_lingam(instance.data);
                    ++fits;

                    if (!is_acyclic(threshold_graph(fit.bhat, 0.0))) {
                        ++violations;
                        notes << " acyclic(seed=" << seed << ")";
                    }
                    bool contained = true;
                    for (int i = 0; i < p && contained; ++i)
                        for (int j = 0; j < p; ++j)
                            if (fit.bhat.weights(i, j) != 0.0 && fit.prior.values(i, j) == 0) {
                                contained = false;
                                break;
                            }
                    if (!contained) {
                        ++violations;
                        notes << " containment(seed=" << seed << ")";
                    }

                    if (rep == 0) {
                        // determinism: bit-identical rerun
                        const FitResult again = fit_psi_lingam(instance.data);
                        if (again.order.sequence != fit.order.sequence ||
                            std::memcmp(again.bhat.weights.data(), fit.bhat.weights.data(),
                                        sizeof(double) *
                                            static_cast<std::size_t>(fit.bhat.weights.size())) != 0) {
                            ++violations;
                            notes << " determinism(seed=" << seed << ")";
                        }

                        // hard-prior ordering: known true edges force the order
                        const Adjacency truth = support(instance.truth);
                        Eigen::MatrixXi hard = Eigen::MatrixXi::Constant(p, p, -1);
                        hard.diagonal().setZero();
                        for (int i = 0; i < p; ++i)
                            for (int j = 0; j < p; ++j)
                                if (truth(i, j) != 0) hard(i, j) = 1;
                        const CausalOrder order =
                            find_causal_order(instance.data, PriorMatrix{hard});
                        for (int i = 0; i < p; ++i)
                            for (int j = 0; j < p; ++j)
                                if (truth(i, j) != 0 && order.position[i] >= order.position[j]) {
                                    ++violations;
                                    notes << " hard-prior(seed=" << seed << ")";
                                }
                    }
                }
            }
        }
    }
    const double elapsed = seconds_since(start);
    report(8, "structural invariants suite", violations == 0,
           std::to_string(fits) + " fits across the grid, " + std::to_string(violations) +
               " violations (=0)" + notes.str() + ", " + fmt(elapsed, 1) + "s");
}

// ---------------------------------------------------------------------------
// 9. Group statistics: null Welch uniformity, exact Cohen's d oracles, nesting.
void criterion_group_stats() {
    // Welch p-values under the null
    Rng rng(999);
    const int edges = 10000;
    std::vector<double> pvalues;
    pvalues.reserve(edges);
    Eigen::VectorXd a(12), b(8);
    for (int e = 0; e < edges; ++e) {
        for (int i = 0; i < 12; ++i) a[i] = normal_quantile(rng.uniform01());
        for (int i = 0; i < 8; ++i) b[i] = normal_quantile(rng.uniform01());
        pvalues.push_back(welch_test(a, b).p_value);
    }
    std::sort(pvalues.begin(), pvalues.end());
    double ks = 0.0;
    for (int i = 0; i < edges; ++i) {
        const double u = pvalues[static_cast<std::size_t>(i)];
        ks = std::max(ks, std::abs(u - static_cast<double>(i + 1) / edges));
        ks = std::max(ks, std::abs(u - static_cast<double>(i) / edges));
    }

    // Cohen's d hand oracles
    Eigen::VectorXd g1(3), g2(3);
    g1 << 1, 2, 3;
    g2 << 3, 4, 5;
    const bool d_exact = cohens_d(g1, g1) == 0.0 && std::abs(cohens_d(g1, g2) - (-2.0)) <= 1e-12 &&
                         std::abs(cohens_d(3.0 * g1, 3.0 * g2) - cohens_d(g1, g2)) <= 1e-12;

    // feature-selection nesting across the d floors
    bool nested = true;
    for (int trial = 0; trial < 5; ++trial) {
        Rng gen(derive_seed(1234, static_cast<std::uint64_t>(trial)));
        auto draw_stack = [&](double shift, const std::string& label) {
            std::vector<Eigen::MatrixXd> subjects;
            for (int s = 0; s < 15; ++s) {
                Eigen::MatrixXd m = Eigen::MatrixXd::Zero(5, 5);
                for (int i = 0; i < 5; ++i)
                    for (int j = i + 1; j < 5; ++j)
                        m(i, j) = 0.2 + 0.1 * normal_quantile(gen.uniform01()) +
                                  (i == 0 && j == 1 ? shift : 0.0);
                subjects.push_back(m);
            }
            return make_subject_stack(std::move(subjects), label);
        };
        const GroupDiffReport report = build_group_report(draw_stack(0.0, "a"), draw_stack(0.15, "b"));
        std::vector<std::set<std::pair<int, int>>> selections;
        for (double floor : {0.5, 0.4, 0.3, 0.2}) {
            std::set<std::pair<int, int>> sel;
            for (const auto& rec : select_features(report, floor, 0.05)) sel.insert({rec.i, rec.j});
            selections.push_back(sel);
        }
        for (std::size_t k = 1; k < selections.size(); ++k)
            if (!std::includes(selections[k].begin(), selections[k].end(), selections[k - 1].begin(),
                               selections[k - 1].end()))
                nested = false;
    }

    const bool pass = ks <= 0.05 && d_exact && nested;
    report(9, "group statistics", pass,
           "null Welch KS=" + fmt(ks) + " (<=0.05), Cohen's d oracles " +
               (d_exact ? "exact" : "WRONG") + ", nesting " + (nested ? "holds" : "VIOLATED"));
}

} // namespace

int main() {
    const auto start = clock_type::now();
    criterion_consistency();
    criterion_bivariate();
    criterion_prior_superset();
    criterion_speed_trend();
    criterion_metric_oracles();
    criterion_gaussianization();
    criterion_group_stats();
    criterion_invariants();
    criterion_high_dimensional();
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED")
              << " (" << fmt(seconds_since(start), 1) << "s total)" << std::endl;
    return failures;
}
