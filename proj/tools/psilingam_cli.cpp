// Command-line front end: simulate | fit | benchmark | netstats | groupdiff.
// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psilingam/psilingam.hpp"

namespace fs = std::filesystem;
using namespace psilingam;

namespace {

struct CommonArgs {
    std::string out = ".";
    std::uint64_t seed = 0;
};

fs::path ensure_out_dir(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open config file '" + path + "'");
    std::map<std::string, std::string> config;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) config[key] = value;
    }
    return config;
}

/// Config-file values become option defaults; command-line flags override them.
void apply_config(CLI::App& cmd, const std::map<std::string, std::string>& config) {
    for (const auto& [key, value] : config) {
        CLI::Option* opt = cmd.get_option_no_throw("--" + key);
        if (opt != nullptr && opt->get_type_size() != 0) opt->default_val(value);
    }
}

NoiseKind parse_noise(const std::string& name) {
    if (name == "exp") return NoiseKind::Exp;
    if (name == "chisq") return NoiseKind::Chisq;
    throw data_error("unknown noise kind '" + name + "' (use exp or chisq)");
}

void write_benchmark_reps(const fs::path& path, const BenchmarkReport& report) {
    atomic_write(path, [&](std::ostream& out) {
        out.precision(17);
        out << "rep\tseed\ttpr\tfdr\tshd\tseconds\n";
        for (const auto& rep : report.reps)
            out << rep.rep << '\t' << rep.seed << '\t' << rep.metrics.tpr << '\t' << rep.metrics.fdr
                << '\t' << rep.metrics.shd << '\t' << rep.metrics.seconds << '\n';
    });
}

void write_benchmark_summary(const fs::path& path, const BenchmarkReport& report) {
    atomic_write(path, [&](std::ostream& out) {
        out.precision(17);
        out << "p: " << report.config.p << '\n'
            << "d: " << report.config.d << '\n'
            << "n: " << report.config.n << '\n'
            << "noise: " << to_string(report.config.noise) << '\n'
            << "reps: " << report.config.reps << '\n'
            << "seed: " << report.config.seed << '\n'
            << "mean_tpr: " << report.mean_tpr << '\n'
            << "sd_tpr: " << report.sd_tpr << '\n'
            << "mean_fdr: " << report.mean_fdr << '\n'
            << "sd_fdr: " << report.sd_fdr << '\n'
            << "mean_shd: " << report.mean_shd << '\n'
            << "sd_shd: " << report.sd_shd << '\n'
            << "mean_seconds: " << report.mean_seconds << '\n';
    });
}

int run_simulate(const CommonArgs& common, int p, double d, int n, const std::string& noise) {
    const fs::path dir = ensure_out_dir(common.out);
    const auto instance = simulate_instance(p, d, n, parse_noise(noise), common.seed);

    atomic_write(dir / "b_true.csv", [&](std::ostream& out) { write_dense(out, instance.truth.weights); });
    atomic_write(dir / "adj_true.csv",
                 [&](std::ostream& out) { write_dense(out, support(instance.truth)); });
    atomic_write(dir / "edges_true.tsv", [&](std::ostream& out) { write_edge_list(out, instance.truth); });
    atomic_write(dir / "data.csv", [&](std::ostream& out) { save_matrix(instance.data, out); });
    std::cout << "wrote b_true.csv, adj_true.csv, edges_true.tsv, data.csv to " << dir.string() << "\n";
    return 0;
}

int run_fit(const CommonArgs& common, const std::string& input, const std::string& header_mode,
            const FitConfig& fit_config) {
    const fs::path dir = ensure_out_dir(common.out);
    bool has_header;
    if (header_mode == "yes") {
        has_header = true;
    } else if (header_mode == "no") {
        has_header = false;
    } else {
        // auto: a header is assumed when the first line has a non-numeric cell
        std::ifstream probe(input);
        if (!probe) throw data_error("cannot open '" + input + "'");
        std::string first;
        std::getline(probe, first);
        const char delim = first.find(',') != std::string::npos ? ',' : '\t';
        has_header = false;
        for (const auto& cell : detail::split_line(first, delim)) {
            double v;
            if (!detail::parse_cell(cell, v)) {
                has_header = true;
                break;
            }
        }
    }

    const DataMatrix data = load_matrix(input, has_header);
    const std::vector<double> ad = anderson_darling(data);
    const std::vector<bool> flags = anderson_darling_flags(ad);
    const FitResult fit = fit_psi_lingam(data, fit_config);

    atomic_write(dir / "bhat.csv", [&](std::ostream& out) { write_dense(out, fit.bhat.weights); });
    atomic_write(dir / "bhat_edges.tsv", [&](std::ostream& out) { write_edge_list(out, fit.bhat); });
    atomic_write(dir / "prior.csv", [&](std::ostream& out) { write_dense(out, fit.prior.values); });
    atomic_write(dir / "prior_edges.tsv",
                 [&](std::ostream& out) { write_edge_set(out, fit.prior_edges, data.labels); });
    atomic_write(dir / "ad_report.tsv", [&](std::ostream& out) {
        out.precision(17);
        out << "column\tlabel\ta2_corrected\tnon_gaussian\n";
        for (std::size_t j = 0; j < ad.size(); ++j)
            out << j + 1 << '\t' << data.labels[j] << '\t' << ad[j] << '\t' << (flags[j] ? 1 : 0) << '\n';
    });
    atomic_write(dir / "diagnostics.txt", [&](std::ostream& out) {
        out << "n: " << data.n() << '\n' << "p: " << data.p() << '\n';
        out << "alpha1: " << fit_config.alpha1 << '\n' << "alpha2: " << fit_config.alpha2 << '\n';
        out << "weight_filter: " << (fit_config.weight_filter ? "on" : "off") << '\n';
        out << "prior_edges: " << fit.diagnostics.prior_edge_count << '\n';
        out << "degenerate_pairs: " << fit.diagnostics.degenerate_pairs << '\n';
        out << "estimated_edges: " << edge_count(threshold_graph(fit.bhat, 0.0)) << '\n';
        out << "causal_order:";
        for (int v : fit.order.sequence) out << ' ' << data.labels[static_cast<std::size_t>(v)];
        out << '\n';
        for (const auto& w : fit.diagnostics.warnings) out << "warning: " << w << '\n';
    });

    // Timings go to the console so file outputs stay byte-identical across runs.
    std::cout << "transform_seconds: " << fit.diagnostics.seconds_transform << "\n"
              << "prior_seconds: " << fit.diagnostics.seconds_prior << "\n"
              << "order_seconds: " << fit.diagnostics.seconds_order << "\n"
              << "weights_seconds: " << fit.diagnostics.seconds_weights << "\n";
    std::cout << "wrote bhat.csv, bhat_edges.tsv, prior.csv, prior_edges.tsv, ad_report.tsv, "
                 "diagnostics.txt to "
              << dir.string() << "\n";
    return 0;
}

int run_benchmark(const CommonArgs& common, BenchmarkConfig config, const std::string& noise,
                  bool paper_sims) {
    const fs::path dir = ensure_out_dir(common.out);
    config.noise = parse_noise(noise);
    config.seed = common.seed;

    if (!paper_sims) {
        const BenchmarkReport report = run_benchmark(config);
        write_benchmark_reps(dir / "reps.tsv", report);
        write_benchmark_summary(dir / "summary.txt", report);
        std::cout << "mean_tpr=" << report.mean_tpr << " mean_fdr=" << report.mean_fdr
                  << " mean_shd=" << report.mean_shd << "\n";
        return 0;
    }

    // Full simulation grid: p in {50,100,200}, d in {1,2,4}, both noises, n=100.
    std::vector<std::string> lines;
    for (int p : {50, 100, 200}) {
        for (double d : {1.0, 2.0, 4.0}) {
            for (NoiseKind kind : {NoiseKind::Exp, NoiseKind::Chisq}) {
                BenchmarkConfig scenario = config;
                scenario.p = p;
                scenario.d = d;
                scenario.n = 100;
                scenario.noise = kind;
                const std::string name = "p" + std::to_string(p) + "_d" +
                                         std::to_string(static_cast<int>(d)) + "_" + to_string(kind);
                const fs::path sub = dir / name;
                fs::create_directories(sub);
                const BenchmarkReport report = run_benchmark(scenario);
                write_benchmark_reps(sub / "reps.tsv", report);
                write_benchmark_summary(sub / "summary.txt", report);
                std::ostringstream row;
                row.precision(17);
                row << p << '\t' << d << '\t' << to_string(kind) << '\t' << report.mean_tpr << '\t'
                    << report.mean_fdr << '\t' << report.mean_shd << '\t' << report.mean_seconds;
                lines.push_back(row.str());
                std::cout << name << " done\n";
            }
        }
    }
    atomic_write(dir / "grid_summary.tsv", [&](std::ostream& out) {
        out << "p\td\tnoise\tmean_tpr\tmean_fdr\tmean_shd\tmean_seconds\n";
        for (const auto& line : lines) out << line << '\n';
    });
    return 0;
}

std::vector<std::string> load_labels(const std::string& path, Eigen::Index p) {
    if (path.empty()) return default_labels(p);
    std::ifstream in(path);
    if (!in) throw data_error("cannot open labels file '" + path + "'");
    std::vector<std::string> labels;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) labels.push_back(line);
    }
    if (static_cast<Eigen::Index>(labels.size()) != p)
        throw data_error("labels file has " + std::to_string(labels.size()) + " entries, expected " +
                         std::to_string(p));
    return labels;
}

int run_netstats(const CommonArgs& common, const std::string& input, double tau,
                 const std::string& labels_path) {
    const fs::path dir = ensure_out_dir(common.out);
    const Eigen::MatrixXd m = load_dense(input);
    if (m.rows() != m.cols()) throw data_error("'" + input + "' is not square");
    const Eigen::Index p = m.rows();
    for (Eigen::Index v = 0; v < p; ++v)
        if (m(v, v) != 0.0) throw data_error("'" + input + "' has a nonzero diagonal entry");
    if (tau < 0.0) throw data_error("tau must be nonnegative");

    Adjacency adj(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) adj(i, j) = (i != j && std::abs(m(i, j)) > tau) ? 1 : 0;

    const std::vector<std::string> labels = load_labels(labels_path, p);
    const NetworkStats stats = network_stats(adj);
    const HubReport hubs = detect_hubs(adj);

    atomic_write(dir / "netstats.txt", [&](std::ostream& out) {
        out.precision(17);
        out << "nodes: " << p << '\n'
            << "edges: " << edge_count(adj) << '\n'
            << "density: " << stats.density << '\n'
            << "transitivity: " << stats.transitivity << '\n'
            << "global_efficiency: " << stats.global_efficiency << '\n'
            << "in_hubs: " << hubs.in_hubs.size() << '\n'
            << "out_hubs: " << hubs.out_hubs.size() << '\n'
            << "sum_hubs: " << hubs.sum_hubs.size() << '\n';
    });
    atomic_write(dir / "degrees.tsv", [&](std::ostream& out) {
        std::vector<std::string> hub_type(static_cast<std::size_t>(p), "-");
        for (const auto& hub : hubs.in_hubs) hub_type[static_cast<std::size_t>(hub.node)] = "in";
        for (const auto& hub : hubs.out_hubs) {
            auto& t = hub_type[static_cast<std::size_t>(hub.node)];
            t = t == "in" ? "in+out" : "out";
        }
        for (const auto& hub : hubs.sum_hubs) hub_type[static_cast<std::size_t>(hub.node)] = "sum";
        out << "node\tlabel\tin_deg\tout_deg\tsum_deg\thub_type\n";
        for (Eigen::Index v = 0; v < p; ++v)
            out << v + 1 << '\t' << labels[static_cast<std::size_t>(v)] << '\t'
                << stats.in_degree[static_cast<std::size_t>(v)] << '\t'
                << stats.out_degree[static_cast<std::size_t>(v)] << '\t'
                << stats.sum_degree[static_cast<std::size_t>(v)] << '\t'
                << hub_type[static_cast<std::size_t>(v)] << '\n';
    });
    std::cout << "density=" << stats.density << " transitivity=" << stats.transitivity
              << " global_efficiency=" << stats.global_efficiency << "\n";
    return 0;
}

int run_groupdiff(const CommonArgs& common, const std::string& subjects_dir, const std::string& groups_path,
                  double alpha, double weight_floor, const std::vector<double>& d_floors) {
    const fs::path dir = ensure_out_dir(common.out);
    std::ifstream groups_in(groups_path);
    if (!groups_in) throw data_error("cannot open group assignment file '" + groups_path + "'");

    // Two groups, ordered by first appearance in the assignment file.
    std::vector<std::string> group_order;
    std::map<std::string, std::vector<std::string>> members;
    std::string line;
    while (std::getline(groups_in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string subject, group;
        if (!(ss >> subject >> group))
            throw data_error("bad line in '" + groups_path + "': " + line);
        if (members.find(group) == members.end()) group_order.push_back(group);
        members[group].push_back(subject);
    }
    if (group_order.size() != 2)
        throw data_error("group assignment must contain exactly 2 groups, found " +
                         std::to_string(group_order.size()));

    auto load_stack = [&](const std::string& group) {
        std::vector<Eigen::MatrixXd> subjects;
        for (const auto& subject : members[group]) {
            const fs::path file = fs::path(subjects_dir) / (subject + ".csv");
            if (!fs::exists(file)) throw data_error("missing subject file '" + file.string() + "'");
            subjects.push_back(load_dense(file.string()));
        }
        return make_subject_stack(std::move(subjects), group);
    };
    const SubjectStack stack_a = load_stack(group_order[0]);
    const SubjectStack stack_b = load_stack(group_order[1]);
    const std::vector<std::string> labels = default_labels(stack_a.p());

    for (const auto* stack : {&stack_a, &stack_b}) {
        std::vector<std::string> warnings;
        const auto edges = group_edges(*stack, alpha, weight_floor, &warnings);
        atomic_write(dir / ("group_edges_" + stack->label + ".tsv"), [&](std::ostream& out) {
            out.precision(17);
            out << "i\tj\tlabel_i\tlabel_j\tmean_weight\tp_value\n";
            for (const auto& edge : edges)
                out << edge.i + 1 << '\t' << edge.j + 1 << '\t'
                    << labels[static_cast<std::size_t>(edge.i)] << '\t'
                    << labels[static_cast<std::size_t>(edge.j)] << '\t' << edge.mean_weight << '\t'
                    << edge.p_value << '\n';
        });
        for (const auto& w : warnings) std::cerr << "warning (" << stack->label << "): " << w << "\n";
    }

    const GroupDiffReport report = build_group_report(stack_a, stack_b);
    const auto write_records = [&](std::ostream& out, const std::vector<EdgeDiff>& records) {
        out.precision(17);
        out << "i\tj\tlabel_i\tlabel_j\tt\tp\td\tmean_" << report.group_a << "\tmean_" << report.group_b
            << "\n";
        for (const auto& rec : records)
            out << rec.i + 1 << '\t' << rec.j + 1 << '\t' << labels[static_cast<std::size_t>(rec.i)]
                << '\t' << labels[static_cast<std::size_t>(rec.j)] << '\t' << rec.t << '\t'
                << rec.p_value << '\t' << rec.d << '\t' << rec.mean_a << '\t' << rec.mean_b << '\n';
    };
    atomic_write(dir / "report.tsv", [&](std::ostream& out) { write_records(out, report.records); });
    for (double floor : d_floors) {
        std::ostringstream name;
        name << "features_d" << floor << ".tsv";
        const auto selected = select_features(report, floor, alpha);
        atomic_write(dir / name.str(), [&](std::ostream& out) { write_records(out, selected); });
    }
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "groups: " << report.group_a << " (" << stack_a.size() << "), " << report.group_b
              << " (" << stack_b.size() << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal structure learning for non-Gaussian data: prior-screened "
                 "DirectLiNGAM with a simulation benchmark and directed-network statistics"};
    app.require_subcommand(1);

    // The config file (flat key=value) provides defaults; flags override.
    std::string config_path;
    for (int a = 1; a + 1 < argc; ++a)
        if (std::string(argv[a]) == "--config") config_path = argv[a + 1];
    std::map<std::string, std::string> config;
    try {
        if (!config_path.empty()) config = load_config_file(config_path);
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CommonArgs common;
    int p = 5;
    double d = 1.0;
    int n = 100;
    std::string noise = "exp";
    std::string input, header_mode = "auto", labels_path;
    FitConfig fit_config;
    BenchmarkConfig bench_config;
    bool paper_sims = false;
    double tau = 0.0;
    std::string subjects_dir, groups_path;
    double alpha = 0.05, weight_floor = 0.1;
    std::vector<double> d_floors = {0.2, 0.3, 0.4, 0.5};

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", common.out, "output directory");
        cmd->add_option("--seed", common.seed, "master seed");
        cmd->add_option("--config", config_path, "flat key=value config file");
    };

    CLI::App* sim = app.add_subcommand("simulate", "draw a random DAG, weights and SEM sample");
    add_common(sim);
    sim->add_option("--p", p, "variable count");
    sim->add_option("--d", d, "degree parameter (edge probability d/(p-1))");
    sim->add_option("--n", n, "sample size");
    sim->add_option("--noise", noise, "noise kind: exp | chisq");

    CLI::App* fit = app.add_subcommand("fit", "fit a weighted DAG to an observation matrix");
    add_common(fit);
    fit->add_option("--input", input, "CSV/TSV observation matrix")->required();
    fit->add_option("--header", header_mode, "header row: auto | yes | no");
    fit->add_option("--alpha1", fit_config.alpha1, "screening significance level");
    fit->add_option("--alpha2", fit_config.alpha2, "edge-test FDR level");
    fit->add_flag("--weight-filter,!--no-weight-filter", fit_config.weight_filter,
                  "per-weight significance filter (default on)");
    fit->add_option("--weight-filter-alpha", fit_config.weight_filter_alpha, "post-filter level");

    CLI::App* bench = app.add_subcommand("benchmark", "repeated simulate+fit trials with metrics");
    add_common(bench);
    bench->add_option("--p", bench_config.p, "variable count");
    bench->add_option("--d", bench_config.d, "degree parameter");
    bench->add_option("--n", bench_config.n, "sample size");
    bench->add_option("--noise", noise, "noise kind: exp | chisq");
    bench->add_option("--reps", bench_config.reps, "trial count");
    bench->add_option("--alpha1", bench_config.fit.alpha1, "screening significance level");
    bench->add_option("--alpha2", bench_config.fit.alpha2, "edge-test FDR level");
    bench->add_flag("--paper-sims", paper_sims,
                    "run the full grid p in {50,100,200}, d in {1,2,4}, both noises, n=100");

    CLI::App* nets = app.add_subcommand("netstats", "directed-network statistics of a graph file");
    add_common(nets);
    nets->add_option("--input", input, "dense p x p weight or adjacency CSV")->required();
    nets->add_option("--tau", tau, "weight threshold: keep |w| > tau");
    nets->add_option("--labels", labels_path, "optional node label file (one per line)");

    CLI::App* gdiff = app.add_subcommand("groupdiff", "group-level edges and between-group features");
    add_common(gdiff);
    gdiff->add_option("--dir", subjects_dir, "directory of per-subject weight CSVs")->required();
    gdiff->add_option("--groups", groups_path, "TSV of (subject_id, group)")->required();
    gdiff->add_option("--alpha", alpha, "significance level");
    gdiff->add_option("--weight-floor", weight_floor, "group-edge |mean weight| floor");
    gdiff->add_option("--d-floors", d_floors, "Cohen's d thresholds for feature lists");

    for (CLI::App* cmd : {sim, fit, bench, nets, gdiff}) apply_config(*cmd, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed()) return run_simulate(common, p, d, n, noise);
        if (fit->parsed()) return run_fit(common, input, header_mode, fit_config);
        if (bench->parsed()) return run_benchmark(common, bench_config, noise, paper_sims);
        if (nets->parsed()) return run_netstats(common, input, tau, labels_path);
        if (gdiff->parsed()) return run_groupdiff(common, subjects_dir, groups_path, alpha, weight_floor, d_floors);
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
