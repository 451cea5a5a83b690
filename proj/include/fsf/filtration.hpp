#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "fsf/embedding.hpp"
#include "fsf/errors.hpp"
#include "fsf/graph.hpp"
#include "fsf/miner.hpp"

namespace fsf {

struct Simplex {
    std::vector<VertexId> vertices; // sorted ascending
    double value = 0.0;

    int dimension() const noexcept { return static_cast<int>(vertices.size()) - 1; }

    friend bool operator==(const Simplex&, const Simplex&) = default;
};

/// Reduction order: value, then dimension, then vertex set.
inline bool filtration_less(const Simplex& a, const Simplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
}

/// Simplicial complex with a filtration value on every simplex, stored in
/// reduction order.
struct FilteredComplex {
    std::vector<Simplex> simplices;

    bool empty() const noexcept { return simplices.empty(); }
    std::size_t size() const noexcept { return simplices.size(); }

    int max_dimension() const noexcept {
        int d = -1;
        for (const auto& s : simplices) d = std::max(d, s.dimension());
        return d;
    }

    friend bool operator==(const FilteredComplex&, const FilteredComplex&) = default;
};

/// Builds a complex from (vertex set, value) pairs: every non-empty subset of
/// each set is added, and each simplex keeps the smallest value among the
/// sets containing it.
inline FilteredComplex close_under_faces(const std::map<std::vector<VertexId>, double>& tops) {
    std::map<std::vector<VertexId>, double> all;
    std::vector<VertexId> face;
    for (const auto& [verts, value] : tops) {
        const std::size_t n = verts.size();
        if (n > 20) throw InvariantError("simplex too large to close under faces");
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            face.clear();
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (1u << i)) face.push_back(verts[i]);
            }
            auto [it, inserted] = all.emplace(face, value);
            if (!inserted) it->second = std::min(it->second, value);
        }
    }
    FilteredComplex c;
    c.simplices.reserve(all.size());
    for (auto& [verts, value] : all) c.simplices.push_back({verts, value});
    std::sort(c.simplices.begin(), c.simplices.end(), filtration_less);
    return c;
}

/// Frequent subgraph filtration of one graph.
///
/// Every embedding of every pattern with at most k vertices spans a simplex on
/// its image set entering at 1 / support; faces are added at the same value.
/// Vertices hit by no embedding are absent. With `cap`, each pattern
/// contributes only its first `cap` embeddings in `graph`.
inline FilteredComplex build_fsf(const LabeledGraph& graph, const PatternSet& patterns, std::size_t k,
                                 std::optional<std::size_t> cap = std::nullopt) {
    std::map<std::vector<VertexId>, double> tops;
    std::vector<VertexId> key;
    for (const Pattern& p : patterns.patterns) {
        if (p.graph.vertex_count() > k || p.mni_support == 0) continue;
        const double value = p.filtration_value();
        for_each_embedding(p.graph, graph, cap, [&](const std::vector<VertexId>& images) {
            key.assign(images.begin(), images.end());
            std::sort(key.begin(), key.end());
            auto [it, inserted] = tops.emplace(key, value);
            if (!inserted) it->second = std::min(it->second, value);
            return true;
        });
    }
    return close_under_faces(tops);
}

/// Lower-star filtration of vertex degree, rescaled by 1 / (max degree + 1):
/// vertex v enters at deg(v), edge {u,v} at max(deg(u), deg(v)).
inline FilteredComplex build_degree_filtration(const LabeledGraph& graph) {
    std::size_t max_degree = 0;
    for (VertexId v = 0; v < graph.vertex_count(); ++v) max_degree = std::max(max_degree, graph.degree(v));
    const double scale = static_cast<double>(max_degree + 1);
    auto value_of = [&](VertexId v) { return static_cast<double>(graph.degree(v)) / scale; };

    FilteredComplex c;
    for (VertexId v = 0; v < graph.vertex_count(); ++v) c.simplices.push_back({{v}, value_of(v)});
    for (const Edge& e : graph.edges()) {
        c.simplices.push_back({{e.first, e.second}, std::max(value_of(e.first), value_of(e.second))});
    }
    std::sort(c.simplices.begin(), c.simplices.end(), filtration_less);
    return c;
}

/// Checks sortedness, closure and monotonicity. Throws InvariantError naming
/// the first offending simplex.
inline void validate_complex(const FilteredComplex& c) {
    auto name = [](const Simplex& s) {
        std::string out = "[";
        for (std::size_t i = 0; i < s.vertices.size(); ++i) out += (i ? "," : "") + std::to_string(s.vertices[i]);
        return out + "]";
    };
    std::map<std::vector<VertexId>, double> index;
    for (std::size_t i = 0; i < c.simplices.size(); ++i) {
        const Simplex& s = c.simplices[i];
        if (s.vertices.empty() || !std::is_sorted(s.vertices.begin(), s.vertices.end()) ||
            std::adjacent_find(s.vertices.begin(), s.vertices.end()) != s.vertices.end()) {
            throw InvariantError("simplex " + name(s) + " has an invalid vertex set");
        }
        if (i > 0 && !filtration_less(c.simplices[i - 1], s)) {
            throw InvariantError("simplex " + name(s) + " is out of filtration order");
        }
        if (s.vertices.size() > 1) {
            std::vector<VertexId> face;
            for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
                face.clear();
                for (std::size_t j = 0; j < s.vertices.size(); ++j) {
                    if (j != drop) face.push_back(s.vertices[j]);
                }
                auto it = index.find(face);
                if (it == index.end()) {
                    throw InvariantError("closure violated: simplex " + name(s) + " is missing face " +
                                         name({face, 0.0}));
                }
                if (it->second > s.value) {
                    throw InvariantError("monotonicity violated: face " + name({face, 0.0}) + " of simplex " +
                                         name(s) + " enters later");
                }
            }
        }
        index.emplace(s.vertices, s.value);
    }
}

// ---------------------------------------------------------------------------
// Complex dump: one simplex per line, "value TAB v0,v1,..." in reduction
// order. Multi-graph files separate complexes with "# graph=<id>" lines.

inline void write_complex(std::ostream& out, const FilteredComplex& c) {
    for (const Simplex& s : c.simplices) {
        out << format_double(s.value) << '\t';
        for (std::size_t i = 0; i < s.vertices.size(); ++i) out << (i ? "," : "") << s.vertices[i];
        out << '\n';
    }
}

inline void write_complexes(std::ostream& out, const std::vector<FilteredComplex>& complexes) {
    for (std::size_t g = 0; g < complexes.size(); ++g) {
        out << "# graph=" << g << '\n';
        write_complex(out, complexes[g]);
    }
}

/// Reads a multi-graph complex dump. A file without graph markers is read as
/// a single complex.
inline std::vector<FilteredComplex> read_complexes(std::istream& in, const std::string& source = "complexes") {
    std::vector<FilteredComplex> out;
    std::string line;
    std::size_t line_no = 0;
    const std::string marker = "# graph=";
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind(marker, 0) == 0) {
            std::size_t id = 0;
            const char* b = line.data() + marker.size();
            auto [ptr, ec] = std::from_chars(b, line.data() + line.size(), id);
            if (ec != std::errc{} || id != out.size()) {
                throw DataError(source, line_no, "graph markers must be consecutive from 0");
            }
            out.emplace_back();
            continue;
        }
        if (line.empty() || line.front() == '#') continue;
        if (out.empty()) out.emplace_back();
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw DataError(source, line_no, "expected 'value TAB vertices'");
        Simplex s;
        auto [vp, vec] = std::from_chars(line.data(), line.data() + tab, s.value);
        if (vec != std::errc{} || vp != line.data() + tab) throw DataError(source, line_no, "malformed filtration value");
        const char* p = line.data() + tab + 1;
        const char* end = line.data() + line.size();
        while (p < end) {
            VertexId v = 0;
            auto [np, ec] = std::from_chars(p, end, v);
            if (ec != std::errc{}) throw DataError(source, line_no, "malformed vertex list");
            s.vertices.push_back(v);
            p = np;
            if (p < end) {
                if (*p != ',') throw DataError(source, line_no, "malformed vertex list");
                ++p;
            }
        }
        out.back().simplices.push_back(std::move(s));
    }
    return out;
}

} // namespace fsf
