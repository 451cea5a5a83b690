// fsf: command-line driver for the frequent-subgraph filtration pipeline.
//
// Stages talk through files so each one can be rerun on its own:
//   mine -> patterns.tsv, filtrate -> complexes.txt, persist -> diagrams.csv,
//   features -> features.csv, classify -> cv_report.json.

#include <sys/resource.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsf/fsf.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string data_dir = "data";
    std::string dataset;
    std::size_t subset = 0;
    std::size_t sigma = 1;
    std::size_t k = 4;
    std::string budget = "inf";
    std::string budgets = "5000,10000,20000,50000,inf";
    std::string dims = "0-2";
    std::string modes = "remove,add";
    std::string ratios = "0.05,0.1";
    std::uint64_t seed = 0;
    std::string out = ".";
    unsigned threads = 1;
    std::string filtration = "fsf";
    std::string patterns;
    std::string complexes;
    std::string diagrams;
    std::string features;
    std::string mode = "remove";
    double ratio = 0.05;
    std::size_t neighbors = 5;
    std::size_t folds = 10;
    bool shuffle_labels = false;
    int max_dim = -1;
};

/// "inf" (or empty) means unbounded.
std::optional<std::size_t> parse_budget(const std::string& s) {
    if (s.empty() || s == "inf" || s == "none") return std::nullopt;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::logic_error&) {
        throw fsf::ConfigError("invalid budget '" + s + "'");
    }
    if (used != s.size() || v == 0) throw fsf::ConfigError("invalid budget '" + s + "'");
    return static_cast<std::size_t>(v);
}

std::string budget_name(const std::optional<std::size_t>& b) { return b ? std::to_string(*b) : "inf"; }

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

std::vector<double> parse_ratios(const std::string& s) {
    std::vector<double> out;
    for (const auto& r : split_list(s)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(r, &used));
            if (used != r.size()) throw std::invalid_argument(r);
        } catch (const std::logic_error&) {
            throw fsf::ConfigError("invalid ratio '" + r + "'");
        }
        if (!(out.back() > 0.0 && out.back() < 1.0)) throw fsf::ConfigError("ratio " + r + " outside (0,1)");
    }
    if (out.empty()) throw fsf::ConfigError("no perturbation ratios given");
    return out;
}

fsf::FiltrationKind parse_filtration(const std::string& s) {
    if (s == "fsf") return fsf::FiltrationKind::frequent_subgraph;
    if (s == "degree") return fsf::FiltrationKind::degree;
    throw fsf::ConfigError("unknown filtration '" + s + "' (expected fsf or degree)");
}

/// Single-line rendering of the effective configuration for file headers.
std::string config_line(const std::string& command, const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string s = "fsf " + command;
    for (const auto& [key, value] : kv) s += " " + key + "=" + value;
    return s;
}

json config_json(const std::string& command, const std::vector<std::pair<std::string, std::string>>& kv) {
    json j;
    j["command"] = command;
    for (const auto& [key, value] : kv) j[key] = value;
    return j;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw fsf::DataError(path.string(), 0, "cannot open for writing");
    return out;
}

std::ifstream open_in(const std::string& path, const std::string& what) {
    if (path.empty()) throw fsf::ConfigError("missing --" + what);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fsf::DataError(fs::path(path).filename().string(), 0, "cannot open " + what + " file " + path);
    return in;
}

fsf::GraphDataset load(const Options& o) {
    if (o.dataset.empty()) throw fsf::ConfigError("missing --dataset");
    fs::path dir = fs::path(o.data_dir) / o.dataset;
    if (!fs::exists(dir / (o.dataset + "_A.txt"))) dir = fs::path(o.data_dir);
    fsf::GraphDataset ds = fsf::load_tudataset(dir, o.dataset);
    if (o.subset > 0 && o.subset < ds.size()) {
        const auto idx = fsf::stratified_subset(ds.class_labels, o.subset, o.seed);
        ds = fsf::select_graphs(ds, idx);
    }
    return ds;
}

std::vector<std::pair<std::string, std::string>> dataset_kv(const Options& o) {
    return {{"dataset", o.dataset}, {"data_dir", o.data_dir}, {"subset", std::to_string(o.subset)},
            {"seed", std::to_string(o.seed)}};
}

fsf::PatternSet load_patterns(const Options& o) {
    auto in = open_in(o.patterns, "patterns");
    return fsf::read_patterns(in, fs::path(o.patterns).filename().string());
}

long peak_rss_kib() {
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    return usage.ru_maxrss;
}

// ---------------------------------------------------------------------------

int cmd_mine(const Options& o) {
    const fsf::MiningConfig cfg{o.sigma, o.k, parse_budget(o.budget)};
    cfg.validate();
    const auto ds = load(o);
    const auto set = fsf::mine_frequent(ds, cfg);
    auto kv = dataset_kv(o);
    kv.insert(kv.end(), {{"sigma", std::to_string(o.sigma)}, {"k", std::to_string(o.k)},
                         {"budget", budget_name(cfg.embedding_budget)}});

    auto pat = open_out(fs::path(o.out) / "patterns.tsv");
    pat << "# " << config_line("mine", kv) << '\n';
    pat << "# support\tfiltration_value\tcanonical_code\tvertex_labels\tedges\n";
    fsf::write_patterns(pat, set);

    json stats;
    stats["config"] = config_json("mine", kv);
    stats["graphs"] = ds.size();
    stats["pattern_count"] = set.size();
    stats["patterns_explored"] = set.stats.patterns_explored;
    stats["embeddings_retained"] = set.stats.embeddings_retained;
    stats["peak_embedding_bytes"] = set.stats.peak_embedding_bytes;
    stats["peak_rss_kib"] = peak_rss_kib();
    stats["runtime_seconds"] = set.stats.wall_seconds;
    open_out(fs::path(o.out) / "mining_stats.json") << stats.dump(2) << '\n';
    std::cout << set.size() << " patterns\n";
    return 0;
}

int cmd_filtrate(const Options& o) {
    const auto kind = parse_filtration(o.filtration);
    const auto cap = parse_budget(o.budget);
    const auto ds = load(o);
    fsf::PatternSet ps;
    if (kind == fsf::FiltrationKind::frequent_subgraph) ps = load_patterns(o);
    std::vector<fsf::FilteredComplex> complexes(ds.size());
    fsf::parallel_for(ds.size(), o.threads, [&](std::size_t g) {
        complexes[g] = kind == fsf::FiltrationKind::degree ? fsf::build_degree_filtration(ds.graphs[g])
                                                           : fsf::build_fsf(ds.graphs[g], ps, o.k, cap);
    });
    auto kv = dataset_kv(o);
    kv.insert(kv.end(), {{"filtration", o.filtration}, {"patterns", o.patterns}, {"k", std::to_string(o.k)},
                         {"budget", budget_name(cap)}});
    auto out = open_out(fs::path(o.out) / "complexes.txt");
    out << "# " << config_line("filtrate", kv) << '\n';
    fsf::write_complexes(out, complexes);
    return 0;
}

int cmd_persist(const Options& o) {
    auto in = open_in(o.complexes, "complexes");
    const auto complexes = fsf::read_complexes(in, fs::path(o.complexes).filename().string());
    int max_dim = o.max_dim;
    if (max_dim < 0) {
        for (const auto& c : complexes) max_dim = std::max(max_dim, c.max_dimension());
        max_dim = std::max(max_dim, 0);
    }
    std::vector<fsf::PersistenceDiagram> diagrams(complexes.size());
    fsf::parallel_for(complexes.size(), o.threads,
                      [&](std::size_t g) { diagrams[g] = fsf::compute_persistence(complexes[g], max_dim); });
    auto out = open_out(fs::path(o.out) / "diagrams.csv");
    out << "# " << config_line("persist", {{"complexes", o.complexes}, {"max_dim", std::to_string(max_dim)}}) << '\n';
    fsf::write_diagrams(out, diagrams);
    return 0;
}

int cmd_features(const Options& o) {
    const auto dims = fsf::parse_dims(o.dims);
    const auto ds = load(o);
    auto in = open_in(o.diagrams, "diagrams");
    const auto diagrams = fsf::read_diagrams(in, ds.size(), fs::path(o.diagrams).filename().string());
    fsf::FeatureMatrix m;
    m.dims = dims;
    for (const auto& d : diagrams) m.rows.push_back(fsf::extract_features(d, dims));
    auto kv = dataset_kv(o);
    kv.insert(kv.end(), {{"diagrams", o.diagrams}, {"dims", o.dims}});
    auto out = open_out(fs::path(o.out) / "features.csv");
    out << "# " << config_line("features", kv) << '\n';
    fsf::write_feature_csv(out, m, ds.class_labels);
    return 0;
}

int cmd_bottleneck(const Options& o) {
    fsf::RobustnessConfig cfg;
    cfg.modes.clear();
    for (const auto& m : split_list(o.modes)) cfg.modes.push_back(fsf::parse_perturb_mode(m));
    if (cfg.modes.empty()) throw fsf::ConfigError("no perturbation modes given");
    cfg.ratios = parse_ratios(o.ratios);
    cfg.dims = fsf::parse_dims(o.dims);
    cfg.seed = o.seed;
    cfg.k = o.k;
    cfg.embedding_cap = parse_budget(o.budget);
    cfg.threads = o.threads;
    const auto ds = load(o);
    const auto ps = load_patterns(o);
    const auto report = fsf::run_robustness(ds, ps, cfg);
    auto kv = dataset_kv(o);
    kv.insert(kv.end(), {{"patterns", o.patterns}, {"k", std::to_string(o.k)}, {"modes", o.modes},
                         {"ratios", o.ratios}, {"dims", o.dims}, {"budget", budget_name(cfg.embedding_cap)},
                         {"cap_infinite", "1"}});
    auto out = open_out(fs::path(o.out) / "robustness.csv");
    out << "# " << config_line("bottleneck", kv) << '\n';
    fsf::write_robustness_csv(out, report);
    return 0;
}

int cmd_perturb(const Options& o) {
    const auto mode = fsf::parse_perturb_mode(o.mode);
    const auto ds = load(o);
    fsf::GraphDataset out = ds;
    out.name = o.dataset + "_" + (mode == fsf::PerturbMode::remove ? "R" : "A");
    for (std::size_t g = 0; g < ds.size(); ++g) {
        out.graphs[g] = fsf::perturb_graph(ds.graphs[g], mode, o.ratio, fsf::trial_seed(o.seed, g, 0, 0));
    }
    const fs::path dir = fs::path(o.out) / out.name;
    fsf::write_tudataset(out, dir, out.name);
    auto kv = dataset_kv(o);
    kv.insert(kv.end(), {{"mode", fsf::to_string(mode)}, {"ratio", fsf::format_double(o.ratio)}});
    open_out(dir / "README.config") << "# " << config_line("perturb", kv) << '\n';
    return 0;
}

int cmd_classify(const Options& o) {
    auto in = open_in(o.features, "features");
    const auto data = fsf::read_feature_csv(in, fs::path(o.features).filename().string());
    fsf::CVConfig cfg;
    cfg.k_neighbors = o.neighbors;
    cfg.folds = o.folds;
    cfg.seed = o.seed;
    cfg.shuffle_labels = o.shuffle_labels;
    cfg.threads = o.threads;
    const auto r = fsf::knn_cross_validate(data.rows, data.labels, cfg);
    json j;
    j["config"] = config_json("classify", {{"features", o.features},
                                           {"neighbors", std::to_string(o.neighbors)},
                                           {"folds", std::to_string(o.folds)},
                                           {"seed", std::to_string(o.seed)},
                                           {"shuffle_labels", o.shuffle_labels ? "1" : "0"}});
    j["feature_count"] = r.feature_count;
    j["folds"] = r.fold_accuracies;
    j["mean"] = r.mean;
    j["std"] = r.stddev;
    open_out(fs::path(o.out) / (o.shuffle_labels ? "cv_report_shuffled.json" : "cv_report.json")) << j.dump(2) << '\n';
    std::cout << "mean " << fsf::format_double(r.mean) << " std " << fsf::format_double(r.stddev) << '\n';
    return 0;
}

/// Full pipeline in one go: FSF and degree-filtration feature CSVs for the
/// downstream classifier harness.
int cmd_export(const Options& o) {
    const fsf::MiningConfig mcfg{o.sigma, o.k, parse_budget(o.budget)};
    mcfg.validate();
    const auto dims = fsf::parse_dims(o.dims);
    const auto ds = load(o);
    const auto ps = fsf::mine_frequent(ds, mcfg);
    auto kv = dataset_kv(o);
    kv.insert(kv.end(), {{"sigma", std::to_string(o.sigma)}, {"k", std::to_string(o.k)},
                         {"budget", budget_name(mcfg.embedding_budget)}, {"dims", o.dims}});

    fsf::FeatureConfig fcfg;
    fcfg.dims = dims;
    fcfg.k = o.k;
    fcfg.embedding_cap = mcfg.embedding_budget;
    fcfg.threads = o.threads;
    auto fph = open_out(fs::path(o.out) / "fph_features.csv");
    fph << "# " << config_line("export", kv) << " filtration=fsf\n";
    fsf::write_feature_csv(fph, fsf::features_for_dataset(ds, ps, fcfg), ds.class_labels);

    fcfg.filtration = fsf::FiltrationKind::degree;
    std::vector<int> deg_dims;
    for (int d : dims) {
        if (d <= 1) deg_dims.push_back(d);
    }
    if (deg_dims.empty()) deg_dims = {0};
    fcfg.dims = deg_dims;
    auto dph = open_out(fs::path(o.out) / "dph_features.csv");
    dph << "# " << config_line("export", kv) << " filtration=degree\n";
    fsf::write_feature_csv(dph, fsf::features_for_dataset(ds, ps, fcfg), ds.class_labels);
    std::cout << ps.size() << " patterns, " << ds.size() << " graphs\n";
    return 0;
}

int cmd_bench_budget(const Options& o) {
    std::vector<std::optional<std::size_t>> budgets;
    for (const auto& b : split_list(o.budgets)) budgets.push_back(parse_budget(b));
    if (budgets.empty()) throw fsf::ConfigError("no budgets given");
    const auto ds = load(o);
    struct Row {
        std::optional<std::size_t> budget;
        fsf::PatternSet set;
    };
    std::vector<Row> rows;
    for (const auto& b : budgets) {
        const fsf::MiningConfig cfg{o.sigma, o.k, b};
        cfg.validate();
        rows.push_back({b, fsf::mine_frequent(ds, cfg)});
    }
    const Row* ref = nullptr;
    for (const auto& r : rows) {
        if (!r.budget) ref = &r;
    }
    if (ref == nullptr) ref = &rows.back();
    auto norm = [](double x, double base) { return base > 0 ? x / base : 0.0; };

    auto kv = dataset_kv(o);
    kv.insert(kv.end(), {{"sigma", std::to_string(o.sigma)}, {"k", std::to_string(o.k)}, {"budgets", o.budgets}});
    auto out = open_out(fs::path(o.out) / "bench_budget.csv");
    out << "# " << config_line("bench-budget", kv) << '\n';
    out << "budget,runtime_s,patterns,embeddings,peak_embedding_bytes,runtime_norm,patterns_norm,embeddings_norm,"
           "memory_norm\n";
    for (const auto& r : rows) {
        const auto& s = r.set.stats;
        const auto& b = ref->set.stats;
        out << budget_name(r.budget) << ',' << fsf::format_double(s.wall_seconds) << ',' << r.set.size() << ','
            << s.embeddings_retained << ',' << s.peak_embedding_bytes << ','
            << fsf::format_double(norm(s.wall_seconds, b.wall_seconds)) << ','
            << fsf::format_double(norm(static_cast<double>(r.set.size()), static_cast<double>(ref->set.size())))
            << ','
            << fsf::format_double(norm(static_cast<double>(s.embeddings_retained),
                                       static_cast<double>(b.embeddings_retained)))
            << ','
            << fsf::format_double(norm(static_cast<double>(s.peak_embedding_bytes),
                                       static_cast<double>(b.peak_embedding_bytes)))
            << '\n';
    }
    return 0;
}

void fail_line(int code, const char* kind, const std::string& message) {
    std::string flat = message;
    for (char& c : flat) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    std::cerr << "fsf: error kind=" << kind << " code=" << code << " message=\"" << flat << "\"\n";
}

} // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Frequent subgraph filtration persistent homology toolkit"};
    app.require_subcommand(1);

    auto add_dataset = [&](CLI::App* c) {
        c->add_option("--dataset", o.dataset, "TUDataset name (files <name>_A.txt, ...)")->required();
        c->add_option("--data-dir", o.data_dir, "directory holding <name>/ or the dataset files");
        c->add_option("--subset", o.subset, "stratified subset size (0 = all graphs)");
    };
    auto add_common = [&](CLI::App* c) {
        c->add_option("--out", o.out, "output directory");
        c->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 1024u));
        c->add_option("--seed", o.seed, "random seed");
    };

    auto* mine = app.add_subcommand("mine", "mine frequent subgraph patterns");
    add_dataset(mine);
    add_common(mine);
    mine->add_option("--sigma", o.sigma, "minimum MNI support");
    mine->add_option("--k", o.k, "maximum pattern vertex count");
    mine->add_option("--budget", o.budget, "embedding budget per candidate, or inf");

    auto* filtrate = app.add_subcommand("filtrate", "build per-graph filtered complexes");
    add_dataset(filtrate);
    add_common(filtrate);
    filtrate->add_option("--patterns", o.patterns, "pattern file from mine");
    filtrate->add_option("--k", o.k, "maximum pattern vertex count");
    filtrate->add_option("--budget", o.budget, "embeddings per pattern and graph, or inf");
    filtrate->add_option("--filtration", o.filtration, "fsf or degree");

    auto* persist = app.add_subcommand("persist", "persistence diagrams of dumped complexes");
    add_common(persist);
    persist->add_option("--complexes", o.complexes, "complex dump from filtrate")->required();
    persist->add_option("--max-dim", o.max_dim, "highest homology dimension (default: complex dimension)");

    auto* features = app.add_subcommand("features", "feature vectors from diagrams");
    add_dataset(features);
    add_common(features);
    features->add_option("--diagrams", o.diagrams, "diagram CSV from persist")->required();
    features->add_option("--dims", o.dims, "homology dimensions, e.g. 0-2 or 1");

    auto* bottleneck = app.add_subcommand("bottleneck", "robustness of diagrams under edge perturbation");
    add_dataset(bottleneck);
    add_common(bottleneck);
    bottleneck->add_option("--patterns", o.patterns, "pattern file from mine")->required();
    bottleneck->add_option("--k", o.k, "maximum pattern vertex count");
    bottleneck->add_option("--budget", o.budget, "embeddings per pattern and graph, or inf");
    bottleneck->add_option("--modes", o.modes, "comma list of remove/add");
    bottleneck->add_option("--ratios", o.ratios, "comma list of ratios in (0,1)");
    bottleneck->add_option("--dims", o.dims, "homology dimensions");

    auto* perturb = app.add_subcommand("perturb", "write an edge-perturbed copy of a dataset");
    add_dataset(perturb);
    add_common(perturb);
    perturb->add_option("--mode", o.mode, "remove or add");
    perturb->add_option("--ratio", o.ratio, "fraction of edges in (0,1)");

    auto* classify = app.add_subcommand("classify", "k-NN cross-validation on a feature CSV");
    add_common(classify);
    classify->add_option("--features", o.features, "feature CSV")->required();
    classify->add_option("--neighbors", o.neighbors, "k of k-NN");
    classify->add_option("--folds", o.folds, "cross-validation folds");
    classify->add_flag("--shuffle-labels", o.shuffle_labels, "permute labels once before folding");

    auto* exportc = app.add_subcommand("export", "mine and write FSF and degree feature CSVs");
    add_dataset(exportc);
    add_common(exportc);
    exportc->add_option("--sigma", o.sigma, "minimum MNI support");
    exportc->add_option("--k", o.k, "maximum pattern vertex count");
    exportc->add_option("--budget", o.budget, "embedding budget, or inf");
    exportc->add_option("--dims", o.dims, "homology dimensions");

    auto* bench = app.add_subcommand("bench-budget", "mining cost and yield across embedding budgets");
    add_dataset(bench);
    add_common(bench);
    bench->add_option("--sigma", o.sigma, "minimum MNI support");
    bench->add_option("--k", o.k, "maximum pattern vertex count");
    bench->add_option("--budgets", o.budgets, "comma list of budgets, inf for exact");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail_line(2, "config", e.what());
        return 2;
    }

    try {
        if (*mine) return cmd_mine(o);
        if (*filtrate) return cmd_filtrate(o);
        if (*persist) return cmd_persist(o);
        if (*features) return cmd_features(o);
        if (*bottleneck) return cmd_bottleneck(o);
        if (*perturb) return cmd_perturb(o);
        if (*classify) return cmd_classify(o);
        if (*exportc) return cmd_export(o);
        if (*bench) return cmd_bench_budget(o);
    } catch (const fsf::ConfigError& e) {
        fail_line(2, "config", e.what());
        return 2;
    } catch (const fsf::DataError& e) {
        fail_line(3, "data", e.what());
        return 3;
    } catch (const fsf::InvariantError& e) {
        fail_line(4, "invariant", e.what());
        return 4;
    } catch (const std::exception& e) {
        fail_line(4, "internal", e.what());
        return 4;
    }
    return 0;
}
