#pragma once

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fsf/errors.hpp"
#include "fsf/filtration.hpp"

namespace fsf {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistencePoint {
    int dimension = 0;
    double birth = 0.0;
    double death = kInfinity;

    bool essential() const noexcept { return std::isinf(death); }
    double lifetime() const noexcept { return death - birth; }

    friend auto operator<=>(const PersistencePoint&, const PersistencePoint&) = default;
};

/// Multiset of (dimension, birth, death) points, kept sorted so equal
/// multisets compare equal.
struct PersistenceDiagram {
    std::vector<PersistencePoint> points;

    void normalize() { std::sort(points.begin(), points.end()); }

    std::vector<PersistencePoint> in_dimension(int dim) const {
        std::vector<PersistencePoint> out;
        for (const auto& p : points) {
            if (p.dimension == dim) out.push_back(p);
        }
        return out;
    }

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

namespace detail {

inline std::vector<std::vector<std::uint32_t>> boundary_columns(const FilteredComplex& c) {
    std::map<std::vector<VertexId>, std::uint32_t> index;
    for (std::uint32_t i = 0; i < c.simplices.size(); ++i) index.emplace(c.simplices[i].vertices, i);
    std::vector<std::vector<std::uint32_t>> columns(c.simplices.size());
    std::vector<VertexId> face;
    for (std::size_t j = 0; j < c.simplices.size(); ++j) {
        const auto& verts = c.simplices[j].vertices;
        if (verts.size() < 2) continue;
        for (std::size_t drop = 0; drop < verts.size(); ++drop) {
            face.clear();
            for (std::size_t t = 0; t < verts.size(); ++t) {
                if (t != drop) face.push_back(verts[t]);
            }
            columns[j].push_back(index.at(face));
        }
        std::sort(columns[j].begin(), columns[j].end());
    }
    return columns;
}

/// a <- a + b over GF(2); both sorted.
inline void add_column(std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                       std::vector<std::uint32_t>& scratch) {
    scratch.clear();
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(scratch));
    a.swap(scratch);
}

} // namespace detail

/// Persistence diagram in dimensions 0..max_dim by column reduction of the
/// boundary matrix over GF(2), processing dimensions top-down with clearing.
/// Zero-lifetime points are kept.
inline PersistenceDiagram compute_persistence(const FilteredComplex& complex, int max_dim) {
    validate_complex(complex);
    const std::size_t n = complex.simplices.size();
    auto columns = detail::boundary_columns(complex);
    std::vector<std::int64_t> pivot_column(n, -1); // row -> column whose low is that row
    std::vector<bool> cleared(n, false);
    std::vector<bool> destroyer(n, false);
    std::vector<std::uint32_t> scratch;

    const int top = std::min(complex.max_dimension(), max_dim + 1);
    for (int dim = top; dim >= 1; --dim) {
        for (std::size_t j = 0; j < n; ++j) {
            if (complex.simplices[j].dimension() != dim) continue;
            auto& col = columns[j];
            if (cleared[j]) {
                col.clear();
                continue;
            }
            while (!col.empty() && pivot_column[col.back()] >= 0) {
                detail::add_column(col, columns[static_cast<std::size_t>(pivot_column[col.back()])], scratch);
            }
            if (!col.empty()) {
                const std::uint32_t low = col.back();
                pivot_column[low] = static_cast<std::int64_t>(j);
                destroyer[j] = true;
                cleared[low] = true;
            }
        }
    }

    PersistenceDiagram d;
    for (std::size_t i = 0; i < n; ++i) {
        const Simplex& s = complex.simplices[i];
        if (s.dimension() > max_dim || destroyer[i]) continue;
        if (pivot_column[i] >= 0) {
            d.points.push_back({s.dimension(), s.value,
                                complex.simplices[static_cast<std::size_t>(pivot_column[i])].value});
        } else {
            d.points.push_back({s.dimension(), s.value, kInfinity});
        }
    }
    d.normalize();
    return d;
}

namespace detail {

/// Rank over GF(2) of a set of columns given as sorted row-index lists.
inline std::size_t gf2_rank(const std::vector<std::vector<std::uint32_t>>& cols, std::size_t rows) {
    const std::size_t words = (rows + 63) / 64;
    std::vector<std::vector<std::uint64_t>> basis(rows); // indexed by leading (highest) bit
    std::size_t rank = 0;
    std::vector<std::uint64_t> v(words);
    for (const auto& col : cols) {
        std::fill(v.begin(), v.end(), 0);
        for (auto r : col) v[r / 64] ^= std::uint64_t{1} << (r % 64);
        while (true) {
            std::size_t w = words;
            while (w > 0 && v[w - 1] == 0) --w;
            if (w == 0) break;
            const std::size_t lead = (w - 1) * 64 + (63 - static_cast<std::size_t>(std::countl_zero(v[w - 1])));
            if (basis[lead].empty()) {
                basis[lead] = v;
                ++rank;
                break;
            }
            for (std::size_t t = 0; t < words; ++t) v[t] ^= basis[lead][t];
        }
    }
    return rank;
}

} // namespace detail

/// Betti numbers beta_0..beta_D of the sublevel complex {value <= at_value},
/// where D is the complex's top dimension; computed as
/// dim C_p - rank d_p - rank d_{p+1} by direct Gaussian elimination.
inline std::vector<std::size_t> betti_numbers(const FilteredComplex& complex, double at_value) {
    validate_complex(complex);
    const int top = complex.max_dimension();
    if (top < 0) return {};
    // Per dimension, local indices of simplices in the sublevel set.
    std::vector<std::map<std::vector<VertexId>, std::uint32_t>> local(static_cast<std::size_t>(top) + 1);
    for (const auto& s : complex.simplices) {
        if (s.value > at_value) continue;
        auto& m = local[static_cast<std::size_t>(s.dimension())];
        m.emplace(s.vertices, static_cast<std::uint32_t>(m.size()));
    }
    std::vector<std::size_t> rank(static_cast<std::size_t>(top) + 2, 0); // rank[p] = rank of d_p
    for (int p = 1; p <= top; ++p) {
        std::vector<std::vector<std::uint32_t>> cols;
        std::vector<VertexId> face;
        for (const auto& [verts, idx] : local[static_cast<std::size_t>(p)]) {
            std::vector<std::uint32_t> col;
            for (std::size_t drop = 0; drop < verts.size(); ++drop) {
                face.clear();
                for (std::size_t t = 0; t < verts.size(); ++t) {
                    if (t != drop) face.push_back(verts[t]);
                }
                col.push_back(local[static_cast<std::size_t>(p - 1)].at(face));
            }
            cols.push_back(std::move(col));
        }
        rank[static_cast<std::size_t>(p)] = detail::gf2_rank(cols, local[static_cast<std::size_t>(p - 1)].size());
    }
    std::vector<std::size_t> betti(static_cast<std::size_t>(top) + 1);
    for (int p = 0; p <= top; ++p) {
        const auto up = static_cast<std::size_t>(p);
        betti[up] = local[up].size() - rank[up] - rank[up + 1];
    }
    return betti;
}

// ---------------------------------------------------------------------------
// Diagram CSV: header graph_id,dim,birth,death; death is a decimal or "inf".

inline void write_diagrams(std::ostream& out, const std::vector<PersistenceDiagram>& diagrams) {
    out << "graph_id,dim,birth,death\n";
    for (std::size_t g = 0; g < diagrams.size(); ++g) {
        for (const auto& p : diagrams[g].points) {
            out << g << ',' << p.dimension << ',' << format_double(p.birth) << ','
                << (p.essential() ? std::string("inf") : format_double(p.death)) << '\n';
        }
    }
}

/// Reads a diagram CSV. `graph_count` sizes the result so graphs without any
/// point still get an (empty) diagram; 0 means "one past the largest id seen".
inline std::vector<PersistenceDiagram> read_diagrams(std::istream& in, std::size_t graph_count = 0,
                                                     const std::string& source = "diagrams") {
    std::vector<PersistenceDiagram> out(graph_count);
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            if (line != "graph_id,dim,birth,death") throw DataError(source, line_no, "unexpected header '" + line + "'");
            header = true;
            continue;
        }
        std::stringstream ss(line);
        std::string f[4];
        for (auto& field : f) {
            if (!std::getline(ss, field, ',')) throw DataError(source, line_no, "expected 4 fields");
        }
        try {
            const std::size_t g = std::stoul(f[0]);
            PersistencePoint p{std::stoi(f[1]), std::stod(f[2]), f[3] == "inf" ? kInfinity : std::stod(f[3])};
            if (g >= out.size()) {
                if (graph_count != 0) throw DataError(source, line_no, "graph id out of range");
                out.resize(g + 1);
            }
            out[g].points.push_back(p);
        } catch (const std::logic_error&) {
            throw DataError(source, line_no, "malformed row '" + line + "'");
        }
    }
    for (auto& d : out) d.normalize();
    return out;
}

} // namespace fsf
