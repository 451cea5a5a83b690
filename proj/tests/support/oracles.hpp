#pragma once

// Brute-force reference implementations. Deliberately naive: exhaustive over
// permutations, tuples, subsets and matchings, for small inputs only.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "fsf/dfs_code.hpp"
#include "fsf/filtration.hpp"
#include "fsf/graph.hpp"
#include "fsf/persistence.hpp"

namespace fsf::oracle {

/// Canonical form: lexicographically smallest (labels, sorted edges) over all
/// vertex relabelings.
using CanonicalForm = std::pair<std::vector<Label>, std::vector<std::pair<VertexId, VertexId>>>;

inline CanonicalForm canonical_form(const PatternGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<VertexId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    CanonicalForm best;
    bool first = true;
    do {
        CanonicalForm f;
        f.first.resize(n);
        for (std::size_t v = 0; v < n; ++v) f.first[perm[v]] = g.labels[v];
        for (const Edge& e : g.edges) {
            VertexId a = perm[e.first], b = perm[e.second];
            if (a > b) std::swap(a, b);
            f.second.emplace_back(a, b);
        }
        std::sort(f.second.begin(), f.second.end());
        if (first || f < best) {
            best = std::move(f);
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline bool isomorphic(const PatternGraph& a, const PatternGraph& b) {
    return a.vertex_count() == b.vertex_count() && a.edges.size() == b.edges.size() &&
           canonical_form(a) == canonical_form(b);
}

/// Every injective, label- and edge-preserving tuple, by exhaustive recursion
/// over all injective assignments; checks happen only on complete tuples.
inline std::vector<std::vector<VertexId>> embeddings(const PatternGraph& p, const LabeledGraph& g) {
    std::vector<std::vector<VertexId>> out;
    const std::size_t n = p.vertex_count();
    std::vector<VertexId> tuple;
    std::vector<bool> used(g.vertex_count(), false);
    std::function<void()> rec = [&] {
        if (tuple.size() == n) {
            for (std::size_t i = 0; i < n; ++i) {
                if (g.label(tuple[i]) != p.labels[i]) return;
            }
            for (const Edge& e : p.edges) {
                if (!g.has_edge(tuple[e.first], tuple[e.second])) return;
            }
            out.push_back(tuple);
            return;
        }
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (used[v]) continue;
            used[v] = true;
            tuple.push_back(v);
            rec();
            tuple.pop_back();
            used[v] = false;
        }
    };
    if (n > 0 && n <= g.vertex_count()) rec();
    return out;
}

inline std::size_t mni(const PatternGraph& p, const LabeledGraph& g) {
    const auto embs = embeddings(p, g);
    if (embs.empty()) return 0;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < p.vertex_count(); ++i) {
        std::set<VertexId> images;
        for (const auto& e : embs) images.insert(e[i]);
        best = std::min(best, images.size());
    }
    return best;
}

/// Frequent connected patterns with 2..k vertices, found by enumerating every
/// connected vertex subset and every edge subset spanning it connectedly.
/// Returns canonical form -> MNI support.
inline std::map<CanonicalForm, std::size_t> frequent_patterns(const LabeledGraph& g, std::size_t sigma,
                                                              std::size_t k) {
    std::set<CanonicalForm> seen;
    std::map<CanonicalForm, PatternGraph> candidates;
    const std::size_t n = g.vertex_count();
    std::vector<VertexId> subset;
    std::function<void(VertexId)> choose = [&](VertexId start) {
        if (subset.size() >= 2) {
            std::vector<Edge> inside;
            for (std::size_t i = 0; i < subset.size(); ++i) {
                for (std::size_t j = i + 1; j < subset.size(); ++j) {
                    if (g.has_edge(subset[i], subset[j])) inside.emplace_back(i, j);
                }
            }
            for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << inside.size()); ++mask) {
                PatternGraph p;
                for (VertexId v : subset) p.labels.push_back(g.label(v));
                for (std::size_t b = 0; b < inside.size(); ++b) {
                    if (mask >> b & 1U) p.edges.push_back(inside[b]);
                }
                if (!p.connected()) continue;
                auto cf = canonical_form(p);
                if (seen.insert(cf).second) candidates.emplace(std::move(cf), std::move(p));
            }
        }
        if (subset.size() == k) return;
        for (VertexId v = start; v < n; ++v) {
            subset.push_back(v);
            choose(v + 1);
            subset.pop_back();
        }
    };
    choose(0);
    std::map<CanonicalForm, std::size_t> out;
    for (const auto& [cf, p] : candidates) {
        const std::size_t s = mni(p, g);
        if (s >= sigma) out.emplace(cf, s);
    }
    return out;
}

/// Bottleneck distance by enumerating every partial matching between the two
/// finite point sets (unmatched points pay their diagonal distance) and every
/// bijection between the essential points.
inline double bottleneck(const std::vector<PersistencePoint>& a, const std::vector<PersistencePoint>& b) {
    std::vector<PersistencePoint> fa, fb;
    std::vector<double> ea, eb;
    for (const auto& p : a) (p.essential() ? (void)ea.push_back(p.birth) : fa.push_back(p));
    for (const auto& p : b) (p.essential() ? (void)eb.push_back(p.birth) : fb.push_back(p));
    if (ea.size() != eb.size()) return kInfinity;

    double essential_cost = std::numeric_limits<double>::infinity();
    std::sort(eb.begin(), eb.end());
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < ea.size(); ++i) c = std::max(c, std::abs(ea[i] - eb[i]));
        essential_cost = std::min(essential_cost, c);
    } while (std::next_permutation(eb.begin(), eb.end()));

    auto diag = [](const PersistencePoint& p) { return (p.death - p.birth) / 2.0; };
    auto dist = [](const PersistencePoint& p, const PersistencePoint& q) {
        return std::max(std::abs(p.birth - q.birth), std::abs(p.death - q.death));
    };
    double best = std::numeric_limits<double>::infinity();
    std::vector<bool> taken(fb.size(), false);
    std::function<void(std::size_t, double)> rec = [&](std::size_t i, double cost) {
        if (cost >= best) return;
        if (i == fa.size()) {
            for (std::size_t j = 0; j < fb.size(); ++j) {
                if (!taken[j]) cost = std::max(cost, diag(fb[j]));
            }
            best = std::min(best, cost);
            return;
        }
        rec(i + 1, std::max(cost, diag(fa[i])));
        for (std::size_t j = 0; j < fb.size(); ++j) {
            if (taken[j]) continue;
            taken[j] = true;
            rec(i + 1, std::max(cost, dist(fa[i], fb[j])));
            taken[j] = false;
        }
    };
    rec(0, 0.0);
    return std::max(essential_cost, best);
}

/// Betti numbers of the sublevel complex at `t` via dense GF(2) rank of each
/// boundary matrix (row reduction on bool matrices).
inline std::vector<std::size_t> betti(const FilteredComplex& c, double t) {
    int top = -1;
    for (const auto& s : c.simplices) top = std::max(top, s.dimension());
    if (top < 0) return {};
    std::vector<std::vector<std::vector<VertexId>>> by_dim(static_cast<std::size_t>(top) + 1);
    for (const auto& s : c.simplices) {
        if (s.value <= t) by_dim[static_cast<std::size_t>(s.dimension())].push_back(s.vertices);
    }
    auto rank_of = [&](std::size_t p) -> std::size_t {
        if (p == 0 || p > static_cast<std::size_t>(top)) return 0;
        const auto& rows = by_dim[p - 1];
        const auto& cols = by_dim[p];
        std::vector<std::vector<bool>> m(rows.size(), std::vector<bool>(cols.size(), false));
        for (std::size_t j = 0; j < cols.size(); ++j) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                m[i][j] = std::includes(cols[j].begin(), cols[j].end(), rows[i].begin(), rows[i].end());
            }
        }
        std::size_t rank = 0;
        for (std::size_t col = 0; col < cols.size() && rank < rows.size(); ++col) {
            std::size_t pivot = rank;
            while (pivot < rows.size() && !m[pivot][col]) ++pivot;
            if (pivot == rows.size()) continue;
            std::swap(m[pivot], m[rank]);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i != rank && m[i][col]) {
                    for (std::size_t j = 0; j < cols.size(); ++j) m[i][j] = m[i][j] != m[rank][j];
                }
            }
            ++rank;
        }
        return rank;
    };
    std::vector<std::size_t> out(static_cast<std::size_t>(top) + 1);
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = by_dim[p].size() - rank_of(p) - rank_of(p + 1);
    return out;
}

/// Points alive at t in dimension p: birth <= t < death.
inline std::size_t alive(const PersistenceDiagram& d, int p, double t) {
    std::size_t n = 0;
    for (const auto& q : d.points) {
        if (q.dimension == p && q.birth <= t && t < q.death) ++n;
    }
    return n;
}

} // namespace fsf::oracle
