#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fsf/errors.hpp"

namespace fsf {

using VertexId = std::uint32_t;
using Label = std::uint32_t;

/// Unordered vertex pair, always stored with first < second.
struct Edge {
    VertexId first = 0;
    VertexId second = 0;

    Edge() = default;
    Edge(VertexId u, VertexId v) : first(std::min(u, v)), second(std::max(u, v)) {}

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected, vertex-labeled simple graph. Immutable once constructed.
///
/// Adjacency is kept in CSR form with each neighbor list sorted ascending, so
/// iteration order over neighbors is deterministic.
class LabeledGraph {
public:
    LabeledGraph() = default;

    /// Throws InvariantError on self-loops, duplicate edges or out-of-range endpoints.
    LabeledGraph(std::vector<Label> labels, std::vector<Edge> edges) : labels_(std::move(labels)) {
        const auto n = static_cast<VertexId>(labels_.size());
        for (const Edge& e : edges) {
            if (e.first == e.second) {
                throw InvariantError("self-loop on vertex " + std::to_string(e.first));
            }
            if (e.second >= n) {
                throw InvariantError("edge endpoint " + std::to_string(e.second) + " out of range (" +
                                     std::to_string(n) + " vertices)");
            }
        }
        std::sort(edges.begin(), edges.end());
        if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
            throw InvariantError("duplicate edge {" + std::to_string(dup->first) + "," +
                                 std::to_string(dup->second) + "}");
        }
        edges_ = std::move(edges);

        offsets_.assign(n + 1, 0);
        for (const Edge& e : edges_) {
            ++offsets_[e.first + 1];
            ++offsets_[e.second + 1];
        }
        std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
        neighbors_.resize(edges_.size() * 2);
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (const Edge& e : edges_) {
            neighbors_[fill[e.first]++] = e.second;
            neighbors_[fill[e.second]++] = e.first;
        }
        for (VertexId v = 0; v < n; ++v) {
            std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                      neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
        }
    }

    std::size_t vertex_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    Label label(VertexId v) const { return labels_[v]; }
    const std::vector<Label>& labels() const noexcept { return labels_; }

    /// Sorted edge list (each edge once, first < second).
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::span<const VertexId> neighbors(VertexId v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }

    std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

    bool has_edge(VertexId u, VertexId v) const {
        if (u == v || u >= vertex_count() || v >= vertex_count()) return false;
        if (degree(u) > degree(v)) std::swap(u, v);
        auto nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    friend bool operator==(const LabeledGraph& a, const LabeledGraph& b) {
        return a.labels_ == b.labels_ && a.edges_ == b.edges_;
    }

private:
    std::vector<Label> labels_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<VertexId> neighbors_;
};

/// Ordered collection of graphs with one class label each.
struct GraphDataset {
    std::string name;
    std::vector<LabeledGraph> graphs;
    std::vector<int> class_labels;
    std::size_t label_alphabet = 0;

    std::size_t size() const noexcept { return graphs.size(); }

    void validate() const {
        if (graphs.size() != class_labels.size()) {
            throw InvariantError("dataset has " + std::to_string(graphs.size()) + " graphs but " +
                                 std::to_string(class_labels.size()) + " class labels");
        }
        for (const auto& g : graphs) {
            for (Label l : g.labels()) {
                if (l >= label_alphabet) {
                    throw InvariantError("vertex label " + std::to_string(l) + " outside alphabet of size " +
                                         std::to_string(label_alphabet));
                }
            }
        }
    }
};

/// The listed graphs (in the given order) with their class labels.
inline GraphDataset select_graphs(const GraphDataset& ds, std::span<const std::size_t> indices) {
    GraphDataset out;
    out.name = ds.name;
    out.label_alphabet = ds.label_alphabet;
    for (std::size_t i : indices) {
        out.graphs.push_back(ds.graphs.at(i));
        out.class_labels.push_back(ds.class_labels.at(i));
    }
    return out;
}

/// Disjoint union of all dataset graphs; graph i occupies the vertex range
/// [offsets[i], offsets[i+1]).
struct UnionGraph {
    LabeledGraph graph;
    std::vector<VertexId> offsets;
};

inline UnionGraph disjoint_union(std::span<const LabeledGraph> graphs) {
    std::vector<Label> labels;
    std::vector<Edge> edges;
    std::vector<VertexId> offsets{0};
    for (const auto& g : graphs) {
        const VertexId base = offsets.back();
        labels.insert(labels.end(), g.labels().begin(), g.labels().end());
        for (const Edge& e : g.edges()) edges.emplace_back(base + e.first, base + e.second);
        offsets.push_back(base + static_cast<VertexId>(g.vertex_count()));
    }
    return {LabeledGraph(std::move(labels), std::move(edges)), std::move(offsets)};
}

/// Relabels vertices: vertex v of `g` becomes vertex perm[v] of the result.
inline LabeledGraph permute_vertices(const LabeledGraph& g, std::span<const VertexId> perm) {
    if (perm.size() != g.vertex_count()) {
        throw InvariantError("permutation size does not match vertex count");
    }
    std::vector<Label> labels(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) labels[perm[v]] = g.label(v);
    std::vector<Edge> edges;
    edges.reserve(g.edge_count());
    for (const Edge& e : g.edges()) edges.emplace_back(perm[e.first], perm[e.second]);
    return LabeledGraph(std::move(labels), std::move(edges));
}

} // namespace fsf
