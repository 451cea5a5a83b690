#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "fsf/errors.hpp"
#include "fsf/graph.hpp"

namespace fsf {

/// Small connected query graph (a subgraph pattern). Vertex i carries labels[i].
struct PatternGraph {
    std::vector<Label> labels;
    std::vector<Edge> edges;

    std::size_t vertex_count() const noexcept { return labels.size(); }

    bool has_edge(VertexId u, VertexId v) const {
        return std::find(edges.begin(), edges.end(), Edge(u, v)) != edges.end();
    }

    std::vector<std::vector<VertexId>> adjacency() const {
        std::vector<std::vector<VertexId>> adj(labels.size());
        for (const Edge& e : edges) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
        for (auto& nb : adj) std::sort(nb.begin(), nb.end());
        return adj;
    }

    bool connected() const {
        if (labels.empty()) return false;
        const auto adj = adjacency();
        std::vector<bool> seen(labels.size(), false);
        std::vector<VertexId> stack{0};
        seen[0] = true;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const VertexId v = stack.back();
            stack.pop_back();
            for (VertexId w : adj[v]) {
                if (!seen[w]) {
                    seen[w] = true;
                    ++reached;
                    stack.push_back(w);
                }
            }
        }
        return reached == labels.size();
    }

    friend bool operator==(const PatternGraph&, const PatternGraph&) = default;
};

/// One entry of a DFS code: an edge between DFS discovery indices.
/// Forward edges have from < to, backward edges from > to.
struct DfsEdge {
    std::uint8_t from = 0;
    std::uint8_t to = 0;
    Label from_label = 0;
    Label to_label = 0;

    bool forward() const noexcept { return from < to; }
    friend bool operator==(const DfsEdge&, const DfsEdge&) = default;
};

/// gSpan's DFS lexicographic order on edges at the same code position.
inline bool dfs_edge_less(const DfsEdge& a, const DfsEdge& b) {
    if (a.from != b.from || a.to != b.to) {
        if (a.forward() && b.forward()) return a.to < b.to || (a.to == b.to && a.from > b.from);
        if (!a.forward() && !b.forward()) return a.from < b.from || (a.from == b.from && a.to < b.to);
        if (!a.forward()) return a.from < b.to;
        return a.to <= b.from;
    }
    if (a.from_label != b.from_label) return a.from_label < b.from_label;
    return a.to_label < b.to_label;
}

using DfsCode = std::vector<DfsEdge>;

/// Vertex count implied by a DFS code (0 for the empty code).
inline std::size_t code_vertex_count(const DfsCode& code) {
    std::size_t n = 0;
    for (const auto& e : code) n = std::max<std::size_t>(n, std::max(e.from, e.to) + 1u);
    return n;
}

/// DFS indices on the rightmost path, from the rightmost vertex back to the root.
inline std::vector<std::uint8_t> rightmost_path(const DfsCode& code) {
    const std::size_t n = code_vertex_count(code);
    std::vector<int> parent(n, -1);
    for (const auto& e : code) {
        if (e.forward()) parent[e.to] = e.from;
    }
    std::vector<std::uint8_t> path;
    for (int v = static_cast<int>(n) - 1; v >= 0; v = parent[static_cast<std::size_t>(v)]) {
        path.push_back(static_cast<std::uint8_t>(v));
    }
    return path;
}

inline PatternGraph pattern_from_code(const DfsCode& code) {
    PatternGraph p;
    p.labels.resize(code_vertex_count(code));
    for (const auto& e : code) {
        p.labels[e.from] = e.from_label;
        p.labels[e.to] = e.to_label;
        p.edges.emplace_back(e.from, e.to);
    }
    std::sort(p.edges.begin(), p.edges.end());
    return p;
}

/// Minimum DFS code of a connected pattern with at least one edge.
///
/// Greedy construction: every partial traversal consistent with the smallest
/// prefix found so far is kept, and at each step the smallest rightmost
/// extension over all of them is appended.
inline DfsCode minimum_dfs_code(const PatternGraph& pattern) {
    const std::size_t n = pattern.vertex_count();
    if (pattern.edges.empty() || !pattern.connected()) {
        throw InvariantError("canonical form requires a connected pattern with at least one edge");
    }
    if (n > 255 || pattern.edges.size() > 64) throw InvariantError("pattern too large for a DFS code");
    const auto adj = pattern.adjacency();
    std::vector<Edge> E = pattern.edges;
    std::sort(E.begin(), E.end());
    auto eidx = [&](VertexId u, VertexId v) {
        return static_cast<std::size_t>(std::lower_bound(E.begin(), E.end(), Edge(u, v)) - E.begin());
    };

    struct State {
        std::vector<VertexId> map; // DFS index -> pattern vertex
        std::uint64_t used = 0;    // bitmask over sorted edge indices
    };

    DfsCode code;
    std::vector<State> states;
    {
        DfsEdge best{0, 1, ~Label{0}, ~Label{0}};
        for (const Edge& e : E) {
            for (auto [u, v] : {std::pair{e.first, e.second}, std::pair{e.second, e.first}}) {
                DfsEdge cand{0, 1, pattern.labels[u], pattern.labels[v]};
                if (dfs_edge_less(cand, best)) {
                    best = cand;
                    states.clear();
                }
                if (cand == best) states.push_back({{u, v}, std::uint64_t{1} << eidx(u, v)});
            }
        }
        code.push_back(best);
    }

    while (code.size() < E.size()) {
        const auto rmpath = rightmost_path(code);
        const auto nv = static_cast<std::uint8_t>(code_vertex_count(code));
        const std::uint8_t rm = rmpath.front();
        bool have = false;
        DfsEdge best{};
        std::vector<State> next;
        auto offer = [&](const DfsEdge& cand, State&& s) {
            if (!have || dfs_edge_less(cand, best)) {
                have = true;
                best = cand;
                next.clear();
            }
            if (cand == best) next.push_back(std::move(s));
        };
        for (const State& s : states) {
            std::vector<bool> in_map(n, false);
            for (VertexId v : s.map) in_map[v] = true;
            const VertexId rv = s.map[rm];
            for (auto it = rmpath.rbegin(); it != rmpath.rend(); ++it) {
                if (*it == rm) continue;
                const VertexId tv = s.map[*it];
                if (!std::binary_search(adj[rv].begin(), adj[rv].end(), tv)) continue;
                const std::size_t ei = eidx(rv, tv);
                if (s.used & (std::uint64_t{1} << ei)) continue;
                State ns = s;
                ns.used |= std::uint64_t{1} << ei;
                offer({rm, *it, pattern.labels[rv], pattern.labels[tv]}, std::move(ns));
            }
            for (std::uint8_t i : rmpath) {
                const VertexId fv = s.map[i];
                for (VertexId w : adj[fv]) {
                    if (in_map[w]) continue;
                    State ns = s;
                    ns.map.push_back(w);
                    ns.used |= std::uint64_t{1} << eidx(fv, w);
                    offer({i, nv, pattern.labels[fv], pattern.labels[w]}, std::move(ns));
                }
            }
        }
        if (!have) throw InvariantError("DFS code construction stalled");
        code.push_back(best);
        states = std::move(next);
    }
    return code;
}

inline bool is_minimal(const DfsCode& code) { return minimum_dfs_code(pattern_from_code(code)) == code; }

/// Byte encoding of a DFS code: per edge from, to (1 byte each) then both
/// labels as big-endian 16-bit integers.
inline std::vector<std::uint8_t> encode_code(const DfsCode& code) {
    std::vector<std::uint8_t> out;
    out.reserve(code.size() * 6);
    for (const auto& e : code) {
        if (e.from_label > 0xFFFF || e.to_label > 0xFFFF) throw InvariantError("label exceeds 16 bits");
        out.push_back(e.from);
        out.push_back(e.to);
        out.push_back(static_cast<std::uint8_t>(e.from_label >> 8));
        out.push_back(static_cast<std::uint8_t>(e.from_label & 0xFF));
        out.push_back(static_cast<std::uint8_t>(e.to_label >> 8));
        out.push_back(static_cast<std::uint8_t>(e.to_label & 0xFF));
    }
    return out;
}

inline DfsCode decode_code(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() % 6 != 0) throw DataError("canonical code length is not a multiple of 6");
    DfsCode code;
    for (std::size_t i = 0; i < bytes.size(); i += 6) {
        code.push_back({bytes[i], bytes[i + 1], static_cast<Label>(bytes[i + 2] << 8 | bytes[i + 3]),
                        static_cast<Label>(bytes[i + 4] << 8 | bytes[i + 5])});
    }
    return code;
}

inline std::string to_hex(const std::vector<std::uint8_t>& bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xF]);
    }
    return s;
}

inline std::vector<std::uint8_t> from_hex(const std::string& s) {
    auto nibble = [&](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
        throw DataError("invalid hex digit in '" + s + "'");
    };
    if (s.size() % 2 != 0) throw DataError("odd-length hex string '" + s + "'");
    std::vector<std::uint8_t> out(s.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint8_t>(nibble(s[2 * i]) << 4 | nibble(s[2 * i + 1]));
    return out;
}

} // namespace fsf
