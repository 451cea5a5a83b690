#pragma once

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "fsf/dfs_code.hpp"
#include "fsf/embedding.hpp"
#include "fsf/errors.hpp"
#include "fsf/graph.hpp"

namespace fsf {

struct MiningConfig {
    std::size_t sigma = 1;
    std::size_t k = 4;
    std::optional<std::size_t> embedding_budget;

    void validate() const {
        if (sigma < 1) throw ConfigError("sigma must be >= 1");
        if (k < 2) throw ConfigError("k must be >= 2");
        if (k > 10) throw ConfigError("k must be <= 10");
        if (embedding_budget && *embedding_budget == 0) throw ConfigError("embedding budget must be positive");
    }
};

/// A frequent connected pattern. Vertices are numbered in the discovery
/// order of its minimum DFS code, so every vertex but the first has an
/// earlier neighbor.
struct Pattern {
    PatternGraph graph;
    std::vector<std::uint8_t> canonical_code;
    std::size_t mni_support = 0;

    /// Value at which the pattern's simplices enter the filtration: 1 / support.
    double filtration_value() const { return 1.0 / static_cast<double>(mni_support); }

    friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct MiningStats {
    std::size_t patterns_explored = 0;   // minimal candidate codes whose support was evaluated
    std::size_t embeddings_retained = 0; // summed over all evaluated candidates
    std::size_t peak_embedding_bytes = 0;
    double wall_seconds = 0.0;
};

struct PatternSet {
    std::vector<Pattern> patterns;
    MiningStats stats;

    std::size_t size() const noexcept { return patterns.size(); }
};

/// Descending support, then ascending canonical code bytes.
inline void sort_patterns(std::vector<Pattern>& patterns) {
    std::sort(patterns.begin(), patterns.end(), [](const Pattern& a, const Pattern& b) {
        if (a.mni_support != b.mni_support) return a.mni_support > b.mni_support;
        return a.canonical_code < b.canonical_code;
    });
}

inline Pattern make_pattern(const PatternGraph& graph, std::size_t support) {
    const DfsCode code = minimum_dfs_code(graph);
    return {pattern_from_code(code), encode_code(code), support};
}

namespace detail {

/// MNI over a flattened list of image tuples (stride = pattern vertex count).
inline std::size_t mni_of_images(const std::vector<VertexId>& flat, std::size_t stride,
                                 std::vector<VertexId>& scratch) {
    if (flat.empty() || stride == 0) return 0;
    const std::size_t count = flat.size() / stride;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t p = 0; p < stride; ++p) {
        scratch.resize(count);
        for (std::size_t e = 0; e < count; ++e) scratch[e] = flat[e * stride + p];
        std::sort(scratch.begin(), scratch.end());
        const auto distinct = static_cast<std::size_t>(std::unique(scratch.begin(), scratch.end()) - scratch.begin());
        best = std::min(best, distinct);
    }
    return best;
}

} // namespace detail

/// Minimum node image support of a pattern in a (union) graph. With `cap`,
/// only the first `cap` embeddings in lexicographic order are considered,
/// which gives a lower bound on the exact value.
inline std::size_t mni_support(const PatternGraph& pattern, const LabeledGraph& graph,
                               std::optional<std::size_t> cap = std::nullopt) {
    std::vector<VertexId> flat;
    for_each_embedding(pattern, graph, cap, [&](const std::vector<VertexId>& images) {
        flat.insert(flat.end(), images.begin(), images.end());
        return true;
    });
    std::vector<VertexId> scratch;
    return detail::mni_of_images(flat, pattern.vertex_count(), scratch);
}

namespace detail {

/// gSpan-style pattern growth over the union graph with MNI support.
///
/// Each DFS code keeps the list of its embeddings (image tuples indexed by
/// DFS vertex) in lexicographic order. Children are produced by rightmost
/// extension of the parent's list, which preserves that order, so truncating
/// a child list to the budget keeps the lexicographically first embeddings
/// and the retained sets are nested as the budget grows.
class MniMiner {
public:
    MniMiner(const LabeledGraph& graph, const MiningConfig& config) : graph_(graph), config_(config) {}

    PatternSet run() {
        const auto start = std::chrono::steady_clock::now();
        std::map<std::pair<Label, Label>, Bucket> roots;
        for (VertexId u = 0; u < graph_.vertex_count(); ++u) {
            for (VertexId v : graph_.neighbors(u)) {
                const Label lu = graph_.label(u), lv = graph_.label(v);
                if (lu > lv) continue;
                Bucket& b = roots[{lu, lv}];
                if (full(b, 2)) continue;
                b.flat.push_back(u);
                b.flat.push_back(v);
            }
        }
        for (auto& [labels, bucket] : roots) track(bucket, 2);
        for (auto& [labels, bucket] : roots) {
            DfsCode code{{0, 1, labels.first, labels.second}};
            evaluate(code, bucket);
            release(bucket, 2);
        }
        sort_patterns(result_.patterns);
        result_.stats.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return std::move(result_);
    }

private:
    struct Bucket {
        std::vector<VertexId> flat;
    };

    bool full(const Bucket& b, std::size_t stride) const {
        return config_.embedding_budget && b.flat.size() / stride >= *config_.embedding_budget;
    }

    void track(const Bucket& b, std::size_t) {
        live_bytes_ += b.flat.size() * sizeof(VertexId);
        result_.stats.peak_embedding_bytes = std::max(result_.stats.peak_embedding_bytes, live_bytes_);
    }

    void release(Bucket& b, std::size_t) {
        live_bytes_ -= b.flat.size() * sizeof(VertexId);
        b.flat.clear();
        b.flat.shrink_to_fit();
    }

    /// `code` is minimal; computes support and grows if frequent.
    void evaluate(DfsCode& code, const Bucket& bucket) {
        const std::size_t stride = code_vertex_count(code);
        ++result_.stats.patterns_explored;
        result_.stats.embeddings_retained += bucket.flat.size() / stride;
        const std::size_t support = mni_of_images(bucket.flat, stride, scratch_);
        if (support < config_.sigma) return;
        result_.patterns.push_back({pattern_from_code(code), encode_code(code), support});
        grow(code, bucket, stride);
    }

    void grow(DfsCode& code, const Bucket& bucket, std::size_t stride) {
        const auto rmpath = rightmost_path(code);
        const std::uint8_t rm = rmpath.front();
        const auto nv = static_cast<std::uint8_t>(stride);
        const bool can_add_vertex = stride < config_.k;

        std::vector<bool> has_backward(stride, false);
        for (const auto& e : code) {
            if (!e.forward() && e.from == rm) has_backward[e.to] = true;
        }
        // Parent of the rightmost vertex is already joined by a tree edge.
        if (rmpath.size() > 1) has_backward[rmpath[1]] = true;

        using Key = std::tuple<std::uint8_t, std::uint8_t, Label, Label>;
        std::map<Key, Bucket> children;
        const std::size_t count = bucket.flat.size() / stride;
        for (std::size_t e = 0; e < count; ++e) {
            const VertexId* emb = bucket.flat.data() + e * stride;
            auto mapped = [&](VertexId w) { return std::find(emb, emb + stride, w) != emb + stride; };

            for (auto it = rmpath.rbegin(); it != rmpath.rend(); ++it) {
                const std::uint8_t j = *it;
                if (j == rm || has_backward[j]) continue;
                if (!graph_.has_edge(emb[rm], emb[j])) continue;
                Bucket& b = children[{rm, j, graph_.label(emb[rm]), graph_.label(emb[j])}];
                if (full(b, stride)) continue;
                b.flat.insert(b.flat.end(), emb, emb + stride);
            }
            if (!can_add_vertex) continue;
            for (std::uint8_t i : rmpath) {
                for (VertexId w : graph_.neighbors(emb[i])) {
                    if (mapped(w)) continue;
                    Bucket& b = children[{i, nv, graph_.label(emb[i]), graph_.label(w)}];
                    if (full(b, stride + 1u)) continue;
                    b.flat.insert(b.flat.end(), emb, emb + stride);
                    b.flat.push_back(w);
                }
            }
        }
        for (auto& [key, child] : children) track(child, 0);
        for (auto& [key, child] : children) {
            const auto [from, to, fl, tl] = key;
            code.push_back({from, to, fl, tl});
            if (is_minimal(code)) evaluate(code, child);
            code.pop_back();
            release(child, 0);
        }
    }

    const LabeledGraph& graph_;
    const MiningConfig& config_;
    PatternSet result_;
    std::vector<VertexId> scratch_;
    std::size_t live_bytes_ = 0;
};

} // namespace detail

/// Mines every connected pattern with 2..k vertices whose MNI support on the
/// disjoint union of the dataset graphs is at least sigma.
inline PatternSet mine_frequent(const LabeledGraph& union_graph, const MiningConfig& config) {
    config.validate();
    return detail::MniMiner(union_graph, config).run();
}

inline PatternSet mine_frequent(const GraphDataset& dataset, const MiningConfig& config) {
    config.validate();
    if (dataset.graphs.empty()) throw ConfigError("cannot mine an empty dataset");
    const UnionGraph u = disjoint_union(dataset.graphs);
    return detail::MniMiner(u.graph, config).run();
}

// ---------------------------------------------------------------------------
// Pattern file: one pattern per line,
//   support TAB filtration_value TAB canonical_code_hex TAB v-labels TAB edge-list
// Lines starting with '#' are comments.

inline std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

inline void write_patterns(std::ostream& out, const PatternSet& set) {
    for (const Pattern& p : set.patterns) {
        out << p.mni_support << '\t' << format_double(p.filtration_value()) << '\t' << to_hex(p.canonical_code)
            << '\t';
        for (std::size_t i = 0; i < p.graph.labels.size(); ++i) out << (i ? "," : "") << p.graph.labels[i];
        out << '\t';
        for (std::size_t i = 0; i < p.graph.edges.size(); ++i) {
            out << (i ? "," : "") << p.graph.edges[i].first << '-' << p.graph.edges[i].second;
        }
        out << '\n';
    }
}

inline PatternSet read_patterns(std::istream& in, const std::string& source = "patterns") {
    PatternSet set;
    std::string line;
    std::size_t line_no = 0;
    auto parse_uint = [&](std::string_view s) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw DataError(source, line_no, "expected non-negative integer, got '" + std::string(s) + "'");
        }
        return v;
    };
    auto split = [](std::string_view s, char sep) {
        std::vector<std::string_view> parts;
        if (s.empty()) return parts;
        std::size_t start = 0;
        while (true) {
            const auto pos = s.find(sep, start);
            parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        return parts;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split(line, '\t');
        if (fields.size() != 5) throw DataError(source, line_no, "expected 5 tab-separated fields");
        Pattern p;
        p.mni_support = parse_uint(fields[0]);
        if (p.mni_support == 0) throw DataError(source, line_no, "support must be positive");
        for (auto l : split(fields[3], ',')) p.graph.labels.push_back(static_cast<Label>(parse_uint(l)));
        for (auto e : split(fields[4], ',')) {
            const auto dash = e.find('-');
            if (dash == std::string_view::npos) throw DataError(source, line_no, "malformed edge '" + std::string(e) + "'");
            const auto u = parse_uint(e.substr(0, dash)), v = parse_uint(e.substr(dash + 1));
            if (u >= p.graph.labels.size() || v >= p.graph.labels.size() || u == v) {
                throw DataError(source, line_no, "edge '" + std::string(e) + "' is invalid");
            }
            p.graph.edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
        }
        try {
            p.canonical_code = from_hex(std::string(fields[2]));
            const DfsCode code = minimum_dfs_code(p.graph);
            if (encode_code(code) != p.canonical_code) {
                throw DataError(source, line_no, "canonical code does not match pattern graph");
            }
            p.graph = pattern_from_code(code);
        } catch (const DataError& e) {
            if (e.line() != 0) throw;
            throw DataError(source, line_no, e.what());
        } catch (const InvariantError& e) {
            throw DataError(source, line_no, e.what());
        }
        set.patterns.push_back(std::move(p));
    }
    return set;
}

} // namespace fsf
