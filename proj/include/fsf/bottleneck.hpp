#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "fsf/persistence.hpp"

namespace fsf {

struct BottleneckResult {
    double distance = 0.0;
    /// Set when the diagrams carry different numbers of essential points;
    /// the distance is then +inf.
    bool infinite_count_mismatch = false;
};

namespace detail {

/// Hopcroft-Karp maximum matching on a bipartite graph with `left` and
/// `right` vertices.
class BipartiteMatcher {
public:
    BipartiteMatcher(std::size_t left, std::size_t right) : adj_(left), match_l_(left), match_r_(right), dist_(left) {}

    void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

    std::size_t max_matching() {
        std::fill(match_l_.begin(), match_l_.end(), kNone);
        std::fill(match_r_.begin(), match_r_.end(), kNone);
        std::size_t matched = 0;
        while (bfs()) {
            for (std::size_t l = 0; l < adj_.size(); ++l) {
                if (match_l_[l] == kNone && dfs(l)) ++matched;
            }
        }
        return matched;
    }

private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    bool bfs() {
        std::queue<std::size_t> q;
        bool found = false;
        for (std::size_t l = 0; l < adj_.size(); ++l) {
            if (match_l_[l] == kNone) {
                dist_[l] = 0;
                q.push(l);
            } else {
                dist_[l] = kNone;
            }
        }
        while (!q.empty()) {
            const std::size_t l = q.front();
            q.pop();
            for (std::size_t r : adj_[l]) {
                const std::size_t next = match_r_[r];
                if (next == kNone) {
                    found = true;
                } else if (dist_[next] == kNone) {
                    dist_[next] = dist_[l] + 1;
                    q.push(next);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t l) {
        for (std::size_t r : adj_[l]) {
            const std::size_t next = match_r_[r];
            if (next == kNone || (dist_[next] == dist_[l] + 1 && dfs(next))) {
                match_l_[l] = r;
                match_r_[r] = l;
                return true;
            }
        }
        dist_[l] = kNone;
        return false;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> match_l_, match_r_, dist_;
};

inline double linf(const PersistencePoint& a, const PersistencePoint& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

inline double to_diagonal(const PersistencePoint& p) { return (p.death - p.birth) / 2.0; }

/// Can every point be matched (or sent to the diagonal) within radius r?
inline bool matchable(std::span<const PersistencePoint> a, std::span<const PersistencePoint> b, double r) {
    const std::size_t n = a.size(), m = b.size();
    BipartiteMatcher g(n + m, m + n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (linf(a[i], b[j]) <= r) g.add_edge(i, j);
        }
        if (to_diagonal(a[i]) <= r) g.add_edge(i, m + i);
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (to_diagonal(b[j]) <= r) g.add_edge(n + j, j);
        for (std::size_t i = 0; i < n; ++i) g.add_edge(n + j, m + i);
    }
    return g.max_matching() == n + m;
}

} // namespace detail

/// Bottleneck distance between two point sets of a single dimension.
///
/// Essential points are matched only to essential points (sorted births);
/// finite points are matched by binary search over the candidate radii
/// {pairwise l-inf distances, distances to the diagonal} with a perfect
/// bipartite matching test at each radius.
inline BottleneckResult bottleneck_distance(std::span<const PersistencePoint> d1,
                                            std::span<const PersistencePoint> d2) {
    std::vector<PersistencePoint> fa, fb;
    std::vector<double> ea, eb;
    auto split = [](std::span<const PersistencePoint> d, std::vector<PersistencePoint>& finite,
                    std::vector<double>& essential) {
        for (const auto& p : d) {
            if (p.essential()) {
                essential.push_back(p.birth);
            } else {
                finite.push_back(p);
            }
        }
    };
    split(d1, fa, ea);
    split(d2, fb, eb);
    if (ea.size() != eb.size()) return {kInfinity, true};

    double result = 0.0;
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    for (std::size_t i = 0; i < ea.size(); ++i) result = std::max(result, std::abs(ea[i] - eb[i]));

    if (fa.empty() && fb.empty()) return {result, false};
    std::vector<double> radii{0.0};
    for (const auto& a : fa) {
        radii.push_back(detail::to_diagonal(a));
        for (const auto& b : fb) radii.push_back(detail::linf(a, b));
    }
    for (const auto& b : fb) radii.push_back(detail::to_diagonal(b));
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

    // Sending everything to the diagonal always works at the largest radius.
    std::size_t lo = 0, hi = radii.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (detail::matchable(fa, fb, radii[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return {std::max(result, radii[lo]), false};
}

/// Bottleneck distance restricted to one homology dimension.
inline BottleneckResult bottleneck_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2, int dimension) {
    const auto a = d1.in_dimension(dimension);
    const auto b = d2.in_dimension(dimension);
    return bottleneck_distance(std::span<const PersistencePoint>(a), std::span<const PersistencePoint>(b));
}

/// Replaces infinite deaths by `cap`.
inline PersistenceDiagram cap_essential(PersistenceDiagram d, double cap = 1.0) {
    for (auto& p : d.points) {
        if (p.essential()) p.death = cap;
    }
    d.normalize();
    return d;
}

} // namespace fsf
