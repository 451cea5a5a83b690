#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fsf/errors.hpp"
#include "fsf/graph.hpp"

namespace fsf {

namespace detail {

/// Reads a TUDataset text file: comma-separated integers, one record per
/// line, LF or CRLF. Blank lines are skipped but still counted for line numbers.
class RecordReader {
public:
    explicit RecordReader(std::filesystem::path path) : path_(std::move(path)), in_(path_) {
        if (!in_) throw DataError(path_.filename().string(), 0, "cannot open file");
    }

    /// Fills `out` with the next non-empty record; false at end of file.
    bool next(std::vector<std::int64_t>& out) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            out.clear();
            std::string_view rest(line);
            bool any = false;
            while (true) {
                while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
                if (rest.empty()) {
                    if (any) fail("trailing comma");
                    break;
                }
                std::int64_t value = 0;
                auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
                if (ec != std::errc{}) fail("expected integer in '" + line + "'");
                out.push_back(value);
                rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
                while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
                if (rest.empty()) break;
                if (rest.front() != ',') fail("unexpected character in '" + line + "'");
                rest.remove_prefix(1);
                any = true;
            }
            if (!out.empty()) return true;
        }
        return false;
    }

    std::size_t line() const noexcept { return line_no_; }
    std::string file() const { return path_.filename().string(); }

    [[noreturn]] void fail(const std::string& what) const { throw DataError(file(), line_no_, what); }

private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::size_t line_no_ = 0;
};

inline std::filesystem::path tu_file(const std::filesystem::path& dir, const std::string& name,
                                     std::string_view suffix) {
    return dir / (name + "_" + std::string(suffix) + ".txt");
}

inline void require_file(const std::filesystem::path& p) {
    if (!std::filesystem::exists(p)) {
        throw DataError(p.filename().string(), 0, "missing mandatory file " + p.string());
    }
}

} // namespace detail

/// Loads `<dir>/<name>_{A,graph_indicator,graph_labels[,node_labels]}.txt`.
///
/// File vertex ids are 1-indexed and global; they are remapped to dense
/// 0-based ids per graph in file order. An edge listed in both directions
/// becomes one undirected edge. Vertex labels are remapped densely in
/// ascending order of the raw value, class labels in first-occurrence order.
inline GraphDataset load_tudataset(const std::filesystem::path& dir, const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path a_path = detail::tu_file(dir, name, "A");
    const fs::path ind_path = detail::tu_file(dir, name, "graph_indicator");
    const fs::path gl_path = detail::tu_file(dir, name, "graph_labels");
    const fs::path nl_path = detail::tu_file(dir, name, "node_labels");
    detail::require_file(a_path);
    detail::require_file(ind_path);
    detail::require_file(gl_path);

    if (fs::exists(detail::tu_file(dir, name, "node_attributes"))) {
        std::cerr << "warning: " << name << ": real-valued node attributes are ignored\n";
    }

    std::vector<std::int64_t> rec;

    std::vector<int> raw_classes;
    {
        detail::RecordReader r(gl_path);
        while (r.next(rec)) {
            if (rec.size() != 1) r.fail("expected exactly one class label per line");
            raw_classes.push_back(static_cast<int>(rec[0]));
        }
    }
    const std::size_t graph_count = raw_classes.size();

    // node -> (graph, local id)
    std::vector<std::uint32_t> node_graph;
    std::vector<VertexId> node_local;
    std::vector<VertexId> graph_sizes(graph_count, 0);
    {
        detail::RecordReader r(ind_path);
        while (r.next(rec)) {
            if (rec.size() != 1) r.fail("expected exactly one graph id per line");
            if (rec[0] < 1 || static_cast<std::size_t>(rec[0]) > graph_count) {
                r.fail("graph id " + std::to_string(rec[0]) + " outside 1.." + std::to_string(graph_count));
            }
            const auto g = static_cast<std::uint32_t>(rec[0] - 1);
            node_graph.push_back(g);
            node_local.push_back(graph_sizes[g]++);
        }
    }
    const std::size_t node_count = node_graph.size();

    std::vector<std::int64_t> raw_node_labels(node_count, 0);
    if (fs::exists(nl_path)) {
        detail::RecordReader r(nl_path);
        std::size_t i = 0;
        while (r.next(rec)) {
            if (i >= node_count) {
                r.fail("node label count exceeds graph indicator length " + std::to_string(node_count));
            }
            raw_node_labels[i++] = rec[0];
        }
        if (i != node_count) {
            r.fail("node label count " + std::to_string(i) + " does not match graph indicator length " +
                   std::to_string(node_count));
        }
    }

    std::map<std::int64_t, Label> label_ids;
    for (auto l : raw_node_labels) label_ids.emplace(l, 0);
    Label next_label = 0;
    for (auto& [raw, id] : label_ids) id = next_label++;

    std::vector<std::vector<Edge>> graph_edges(graph_count);
    {
        // undirected edge -> bitmask of directions seen (1: low->high, 2: high->low)
        std::map<std::pair<std::size_t, std::size_t>, unsigned> seen;
        detail::RecordReader r(a_path);
        while (r.next(rec)) {
            if (rec.size() != 2) r.fail("expected two vertex ids per edge");
            for (auto v : rec) {
                if (v < 1 || static_cast<std::size_t>(v) > node_count) {
                    r.fail("edge references unknown vertex " + std::to_string(v));
                }
            }
            const auto u = static_cast<std::size_t>(rec[0] - 1);
            const auto v = static_cast<std::size_t>(rec[1] - 1);
            if (u == v) r.fail("self-loop on vertex " + std::to_string(u + 1));
            if (node_graph[u] != node_graph[v]) r.fail("edge joins vertices of different graphs");
            const unsigned dir_bit = u < v ? 1u : 2u;
            unsigned& mask = seen[{std::min(u, v), std::max(u, v)}];
            if (mask & dir_bit) {
                r.fail("duplicate edge " + std::to_string(u + 1) + ", " + std::to_string(v + 1));
            }
            if (mask == 0) graph_edges[node_graph[u]].emplace_back(node_local[u], node_local[v]);
            mask |= dir_bit;
        }
    }

    GraphDataset ds;
    ds.name = name;
    ds.label_alphabet = label_ids.size();
    std::vector<std::vector<Label>> graph_labels(graph_count);
    for (std::size_t g = 0; g < graph_count; ++g) graph_labels[g].resize(graph_sizes[g]);
    for (std::size_t i = 0; i < node_count; ++i) {
        graph_labels[node_graph[i]][node_local[i]] = label_ids.at(raw_node_labels[i]);
    }
    ds.graphs.reserve(graph_count);
    for (std::size_t g = 0; g < graph_count; ++g) {
        ds.graphs.emplace_back(std::move(graph_labels[g]), std::move(graph_edges[g]));
    }

    std::unordered_map<int, int> class_ids;
    for (int c : raw_classes) {
        auto [it, inserted] = class_ids.emplace(c, static_cast<int>(class_ids.size()));
        ds.class_labels.push_back(it->second);
    }
    return ds;
}

/// Writes the dataset in TUDataset layout (both edge directions, node labels
/// always emitted). Reloading gives back the same dataset.
inline void write_tudataset(const GraphDataset& ds, const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    auto open = [&](std::string_view suffix) {
        std::ofstream out(detail::tu_file(dir, name, suffix));
        if (!out) throw DataError(detail::tu_file(dir, name, suffix).string(), 0, "cannot open for writing");
        return out;
    };
    std::ofstream a = open("A");
    std::ofstream ind = open("graph_indicator");
    std::ofstream gl = open("graph_labels");
    std::ofstream nl = open("node_labels");
    std::size_t base = 1;
    for (std::size_t g = 0; g < ds.graphs.size(); ++g) {
        const auto& graph = ds.graphs[g];
        for (VertexId v = 0; v < graph.vertex_count(); ++v) {
            ind << (g + 1) << '\n';
            nl << graph.label(v) << '\n';
        }
        for (const Edge& e : graph.edges()) {
            a << base + e.first << ", " << base + e.second << '\n';
            a << base + e.second << ", " << base + e.first << '\n';
        }
        gl << ds.class_labels[g] << '\n';
        base += graph.vertex_count();
    }
}

} // namespace fsf
