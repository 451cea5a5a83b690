#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsf/errors.hpp"
#include "fsf/graph.hpp"
#include "fsf/random.hpp"

namespace fsf {

enum class PerturbMode { remove, add };

inline std::string to_string(PerturbMode m) { return m == PerturbMode::remove ? "remove" : "add"; }

inline PerturbMode parse_perturb_mode(const std::string& s) {
    if (s == "remove" || s == "R") return PerturbMode::remove;
    if (s == "add" || s == "A") return PerturbMode::add;
    throw ConfigError("unknown perturbation mode '" + s + "' (expected remove or add)");
}

/// Number of edges touched by a perturbation of the given ratio: floor(ratio * |E|).
inline std::size_t perturbation_size(double ratio, std::size_t edge_count) {
    // The epsilon keeps products like 0.29 * 100 from flooring to 28.
    return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(edge_count) + 1e-9));
}

/// Removes, or adds, floor(ratio * |E|) edges chosen uniformly without
/// replacement. Added edges are drawn from all non-adjacent vertex pairs
/// regardless of labels. Deterministic in `seed`.
inline LabeledGraph perturb_graph(const LabeledGraph& g, PerturbMode mode, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("perturbation ratio must lie in (0,1)");
    const std::size_t count = perturbation_size(ratio, g.edge_count());
    if (count == 0) return g;

    Rng rng(seed);
    std::vector<Edge> edges = g.edges();
    if (mode == PerturbMode::remove) {
        partial_shuffle(std::span<Edge>(edges), count, rng);
        edges.erase(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(count));
    } else {
        std::vector<Edge> candidates;
        const auto n = static_cast<VertexId>(g.vertex_count());
        for (VertexId u = 0; u < n; ++u) {
            for (VertexId v = u + 1; v < n; ++v) {
                if (!g.has_edge(u, v)) candidates.emplace_back(u, v);
            }
        }
        if (candidates.size() < count) {
            throw ConfigError("cannot add " + std::to_string(count) + " edges: only " +
                              std::to_string(candidates.size()) + " non-edges available (short by " +
                              std::to_string(count - candidates.size()) + ")");
        }
        partial_shuffle(std::span<Edge>(candidates), count, rng);
        edges.insert(edges.end(), candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(count));
    }
    return LabeledGraph(g.labels(), std::move(edges));
}

} // namespace fsf
