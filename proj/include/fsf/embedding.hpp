#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <vector>

#include "fsf/dfs_code.hpp"
#include "fsf/graph.hpp"

namespace fsf {

/// Injective, label- and adjacency-preserving map of a pattern into a target
/// graph; images[i] is the target vertex hit by pattern vertex i.
struct Embedding {
    std::vector<VertexId> images;

    friend auto operator<=>(const Embedding&, const Embedding&) = default;
};

namespace detail {

class Matcher {
public:
    Matcher(const PatternGraph& pattern, const LabeledGraph& target) : pattern_(pattern), target_(target) {
        const std::size_t n = pattern.vertex_count();
        adj_ = pattern.adjacency();
        earlier_.resize(n);
        anchor_.assign(n, -1);
        for (std::size_t i = 0; i < n; ++i) {
            for (VertexId w : adj_[i]) {
                if (w < i) {
                    earlier_[i].push_back(w);
                    if (anchor_[i] < 0) anchor_[i] = static_cast<int>(w);
                }
            }
        }
    }

    /// Calls visit(images) for embeddings in lexicographic order of the image
    /// tuple; stops after `cap` embeddings or when visit returns false.
    template <typename Visit>
    void run(std::optional<std::size_t> cap, Visit&& visit) {
        const std::size_t n = pattern_.vertex_count();
        if (n == 0 || n > target_.vertex_count()) return;

        // Label-frequency pruning: the target must hold at least as many
        // vertices of each label as the pattern.
        Label max_label = 0;
        for (Label l : pattern_.labels) max_label = std::max(max_label, l);
        std::vector<std::size_t> need(max_label + 1, 0), have(max_label + 1, 0);
        for (Label l : pattern_.labels) ++need[l];
        for (Label l : target_.labels()) {
            if (l <= max_label) ++have[l];
        }
        for (Label l = 0; l <= max_label; ++l) {
            if (have[l] < need[l]) return;
        }

        by_label_.assign(max_label + 1, {});
        for (VertexId v = 0; v < target_.vertex_count(); ++v) {
            if (target_.label(v) <= max_label && need[target_.label(v)] > 0) by_label_[target_.label(v)].push_back(v);
        }

        images_.assign(n, 0);
        used_.assign(target_.vertex_count(), false);
        remaining_ = cap;
        stop_ = false;
        extend(0, visit);
    }

private:
    bool feasible(std::size_t i, VertexId v) const {
        if (used_[v] || target_.label(v) != pattern_.labels[i]) return false;
        if (target_.degree(v) < adj_[i].size()) return false;
        for (VertexId w : earlier_[i]) {
            if (!target_.has_edge(v, images_[w])) return false;
        }
        return true;
    }

    template <typename Visit>
    void extend(std::size_t i, Visit& visit) {
        if (i == pattern_.vertex_count()) {
            if (!visit(images_)) stop_ = true;
            if (remaining_ && --*remaining_ == 0) stop_ = true;
            return;
        }
        auto try_vertex = [&](VertexId v) {
            if (!feasible(i, v)) return;
            images_[i] = v;
            used_[v] = true;
            extend(i + 1, visit);
            used_[v] = false;
        };
        if (anchor_[i] >= 0) {
            for (VertexId v : target_.neighbors(images_[static_cast<std::size_t>(anchor_[i])])) {
                try_vertex(v);
                if (stop_) return;
            }
        } else {
            for (VertexId v : by_label_[pattern_.labels[i]]) {
                try_vertex(v);
                if (stop_) return;
            }
        }
    }

    const PatternGraph& pattern_;
    const LabeledGraph& target_;
    std::vector<std::vector<VertexId>> adj_;
    std::vector<std::vector<VertexId>> earlier_;
    std::vector<int> anchor_;
    std::vector<std::vector<VertexId>> by_label_;
    std::vector<VertexId> images_;
    std::vector<bool> used_;
    std::optional<std::size_t> remaining_;
    bool stop_ = false;
};

} // namespace detail

/// Visits embeddings of `pattern` in `target` in lexicographic order of their
/// image tuples. `visit` receives the image tuple and returns false to stop.
/// With `cap`, at most the first `cap` embeddings are visited.
template <typename Visit>
void for_each_embedding(const PatternGraph& pattern, const LabeledGraph& target, std::optional<std::size_t> cap,
                        Visit&& visit) {
    if (cap && *cap == 0) return;
    detail::Matcher m(pattern, target);
    m.run(cap, visit);
}

/// All non-induced embeddings of a connected pattern, lexicographically
/// ordered; truncated to the first `cap` when given.
inline std::vector<Embedding> enumerate_embeddings(const PatternGraph& pattern, const LabeledGraph& target,
                                                   std::optional<std::size_t> cap = std::nullopt) {
    std::vector<Embedding> out;
    for_each_embedding(pattern, target, cap, [&](const std::vector<VertexId>& images) {
        out.push_back({images});
        return true;
    });
    return out;
}

} // namespace fsf
