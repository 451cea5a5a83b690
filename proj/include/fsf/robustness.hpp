#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fsf/bottleneck.hpp"
#include "fsf/features.hpp"
#include "fsf/filtration.hpp"
#include "fsf/miner.hpp"
#include "fsf/parallel.hpp"
#include "fsf/perturb.hpp"
#include "fsf/persistence.hpp"

namespace fsf {

struct RobustnessConfig {
    std::vector<PerturbMode> modes{PerturbMode::remove, PerturbMode::add};
    std::vector<double> ratios{0.05, 0.1};
    std::vector<int> dims{1, 2};
    std::uint64_t seed = 0;
    std::size_t k = 4;
    std::optional<std::size_t> embedding_cap;
    /// Replace infinite deaths by 1 on both sides before matching.
    bool cap_infinite = true;
    unsigned threads = 1;
};

struct RobustnessCell {
    PerturbMode mode = PerturbMode::remove;
    double ratio = 0.0;
    int dimension = 0;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t graph_count = 0;
    /// Graphs whose distance was infinite (only possible with cap_infinite off).
    std::size_t infinite_count = 0;
};

struct RobustnessReport {
    std::string dataset;
    std::uint64_t seed = 0;
    std::vector<RobustnessCell> cells;
};

/// 64-bit mix (splitmix64 finalizer) for deriving per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t graph, std::size_t mode, std::size_t ratio) {
    return mix_seed(mix_seed(mix_seed(seed ^ graph) ^ (mode + 1)) ^ (ratio + 1));
}

/// Perturbs every graph, rebuilds its filtration with the same (frozen)
/// pattern set and reports the mean and population standard deviation of the
/// bottleneck distance to the unperturbed diagram per (mode, ratio, dim).
inline RobustnessReport run_robustness(const GraphDataset& dataset, const PatternSet& patterns,
                                       const RobustnessConfig& config) {
    if (dataset.graphs.empty()) throw ConfigError("robustness needs at least one graph");
    if (config.dims.empty()) throw ConfigError("no homology dimensions selected");
    const int max_dim = *std::max_element(config.dims.begin(), config.dims.end());
    auto diagram_of = [&](const LabeledGraph& g) {
        PersistenceDiagram d = compute_persistence(build_fsf(g, patterns, config.k, config.embedding_cap), max_dim);
        return config.cap_infinite ? cap_essential(std::move(d)) : d;
    };

    const std::size_t n = dataset.size();
    std::vector<PersistenceDiagram> original(n);
    parallel_for(n, config.threads, [&](std::size_t g) { original[g] = diagram_of(dataset.graphs[g]); });

    RobustnessReport report{dataset.name, config.seed, {}};
    for (std::size_t mi = 0; mi < config.modes.size(); ++mi) {
        for (std::size_t ri = 0; ri < config.ratios.size(); ++ri) {
            // distances[g][d]
            std::vector<std::vector<BottleneckResult>> distances(n);
            parallel_for(n, config.threads, [&](std::size_t g) {
                const LabeledGraph& graph = dataset.graphs[g];
                const std::size_t touched = perturbation_size(config.ratios[ri], graph.edge_count());
                std::vector<BottleneckResult>& row = distances[g];
                if (touched == 0) {
                    row.assign(config.dims.size(), BottleneckResult{});
                    return;
                }
                const LabeledGraph perturbed =
                    perturb_graph(graph, config.modes[mi], config.ratios[ri], trial_seed(config.seed, g, mi, ri));
                const PersistenceDiagram after = diagram_of(perturbed);
                for (int dim : config.dims) row.push_back(bottleneck_distance(original[g], after, dim));
            });
            for (std::size_t di = 0; di < config.dims.size(); ++di) {
                RobustnessCell cell{config.modes[mi], config.ratios[ri], config.dims[di], 0.0, 0.0, 0, 0};
                std::vector<double> finite;
                for (std::size_t g = 0; g < n; ++g) {
                    if (distances[g][di].infinite_count_mismatch) {
                        ++cell.infinite_count;
                    } else {
                        finite.push_back(distances[g][di].distance);
                    }
                }
                cell.graph_count = n;
                if (!finite.empty()) {
                    double sum = 0.0;
                    for (double x : finite) sum += x;
                    cell.mean = sum / static_cast<double>(finite.size());
                    double var = 0.0;
                    for (double x : finite) var += (x - cell.mean) * (x - cell.mean);
                    cell.stddev = std::sqrt(var / static_cast<double>(finite.size()));
                }
                report.cells.push_back(cell);
            }
        }
    }
    return report;
}

inline void write_robustness_csv(std::ostream& out, const RobustnessReport& r) {
    out << "dataset,dim,mode,ratio,mean,std,graphs,infinite,seed\n";
    for (const auto& c : r.cells) {
        out << r.dataset << ",H" << c.dimension << ',' << (c.mode == PerturbMode::remove ? 'R' : 'A') << ','
            << format_double(c.ratio) << ',' << format_double(c.mean) << ',' << format_double(c.stddev) << ','
            << c.graph_count << ',' << c.infinite_count << ',' << r.seed << '\n';
    }
}

} // namespace fsf
