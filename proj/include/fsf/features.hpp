#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fsf/errors.hpp"
#include "fsf/filtration.hpp"
#include "fsf/miner.hpp"
#include "fsf/parallel.hpp"
#include "fsf/persistence.hpp"

namespace fsf {

inline constexpr std::size_t kStatsPerDimension = 7;

/// Per selected dimension: mean, max, min, median, std, Betti, entropy of the
/// bar lifetimes; followed by total persistence.
struct FeatureVector {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

namespace detail {

inline void lifetime_block(std::vector<double> lifetimes, std::vector<double>& out) {
    if (lifetimes.empty()) {
        out.insert(out.end(), kStatsPerDimension, 0.0);
        return;
    }
    std::sort(lifetimes.begin(), lifetimes.end());
    const auto n = static_cast<double>(lifetimes.size());
    const double total = std::accumulate(lifetimes.begin(), lifetimes.end(), 0.0);
    const double mean = total / n;
    const std::size_t mid = lifetimes.size() / 2;
    const double median =
        lifetimes.size() % 2 == 1 ? lifetimes[mid] : (lifetimes[mid - 1] + lifetimes[mid]) / 2.0;
    double var = 0.0;
    for (double l : lifetimes) var += (l - mean) * (l - mean);
    var /= n;
    double entropy = 0.0;
    if (total > 0.0) {
        for (double l : lifetimes) {
            const double q = l / total;
            if (q > 0.0) entropy -= q * std::log(q);
        }
    }
    out.insert(out.end(), {mean, lifetimes.back(), lifetimes.front(), median, std::sqrt(var), n, entropy});
}

} // namespace detail

/// Feature vector over the listed homology dimensions (in the given order).
/// Infinite deaths count as 1 and zero-lifetime points are dropped before the
/// statistics; total persistence sums d - b over the finite points of every
/// dimension present in the diagram.
inline FeatureVector extract_features(const PersistenceDiagram& diagram, const std::vector<int>& dims) {
    FeatureVector f;
    f.values.reserve(kStatsPerDimension * dims.size() + 1);
    for (int dim : dims) {
        std::vector<double> lifetimes;
        for (const auto& p : diagram.points) {
            if (p.dimension != dim) continue;
            const double death = p.essential() ? 1.0 : p.death;
            const double life = death - p.birth;
            if (life != 0.0) lifetimes.push_back(life);
        }
        detail::lifetime_block(std::move(lifetimes), f.values);
    }
    double total = 0.0;
    for (const auto& p : diagram.points) {
        if (!p.essential()) total += p.death - p.birth;
    }
    f.values.push_back(total);
    return f;
}

inline std::vector<int> dimension_range(int max_dim) {
    std::vector<int> dims(static_cast<std::size_t>(max_dim + 1));
    std::iota(dims.begin(), dims.end(), 0);
    return dims;
}

/// Dimensions 0..d.
inline FeatureVector extract_features(const PersistenceDiagram& diagram, int d) {
    return extract_features(diagram, dimension_range(d));
}

/// Parses "0-2", "1", "0,2", "0-1,3" into a sorted, de-duplicated list.
inline std::vector<int> parse_dims(const std::string& spec) {
    std::set<int> dims;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            const auto dash = part.find('-');
            std::size_t used = 0;
            if (dash == std::string::npos) {
                dims.insert(std::stoi(part, &used));
                if (used != part.size()) throw std::invalid_argument(part);
            } else {
                const int lo = std::stoi(part.substr(0, dash));
                const int hi = std::stoi(part.substr(dash + 1));
                if (lo > hi) throw std::invalid_argument(part);
                for (int d = lo; d <= hi; ++d) dims.insert(d);
            }
        } catch (const std::logic_error&) {
            throw ConfigError("invalid dimension list '" + spec + "'");
        }
    }
    if (dims.empty() || *dims.begin() < 0) throw ConfigError("invalid dimension list '" + spec + "'");
    return {dims.begin(), dims.end()};
}

struct FeatureMatrix {
    std::vector<int> dims;
    std::vector<FeatureVector> rows;

    std::size_t columns() const noexcept { return kStatsPerDimension * dims.size() + 1; }
};

enum class FiltrationKind { frequent_subgraph, degree };

struct FeatureConfig {
    std::vector<int> dims{0, 1, 2};
    std::size_t k = 4;
    std::optional<std::size_t> embedding_cap;
    FiltrationKind filtration = FiltrationKind::frequent_subgraph;
    unsigned threads = 1;
};

/// Builds the filtration of every graph, computes persistence up to the
/// largest selected dimension and stacks the feature vectors in dataset order.
inline FeatureMatrix features_for_dataset(const GraphDataset& dataset, const PatternSet& patterns,
                                          const FeatureConfig& config) {
    if (config.dims.empty()) throw ConfigError("no homology dimensions selected");
    const int max_dim = *std::max_element(config.dims.begin(), config.dims.end());
    if (config.filtration == FiltrationKind::frequent_subgraph && max_dim > static_cast<int>(config.k) - 1) {
        throw ConfigError("dimension " + std::to_string(max_dim) + " exceeds k - 1 = " +
                          std::to_string(config.k - 1));
    }
    FeatureMatrix m;
    m.dims = config.dims;
    m.rows.resize(dataset.size());
    parallel_for(dataset.size(), config.threads, [&](std::size_t g) {
        const FilteredComplex c = config.filtration == FiltrationKind::degree
                                      ? build_degree_filtration(dataset.graphs[g])
                                      : build_fsf(dataset.graphs[g], patterns, config.k, config.embedding_cap);
        m.rows[g] = extract_features(compute_persistence(c, max_dim), config.dims);
    });
    return m;
}

// ---------------------------------------------------------------------------
// Feature CSV: header graph_id,class,f_0,...,f_{N-1}.

inline void write_feature_csv(std::ostream& out, const FeatureMatrix& m, const std::vector<int>& classes) {
    out << "graph_id,class";
    for (std::size_t j = 0; j < m.columns(); ++j) out << ",f_" << j;
    out << '\n';
    for (std::size_t g = 0; g < m.rows.size(); ++g) {
        out << g << ',' << classes.at(g);
        for (double v : m.rows[g].values) out << ',' << format_double(v);
        out << '\n';
    }
}

struct LabeledFeatures {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
};

inline LabeledFeatures read_feature_csv(std::istream& in, const std::string& source = "features") {
    LabeledFeatures out;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (!header) {
            if (fields.size() < 3 || fields[0] != "graph_id" || fields[1] != "class") {
                throw DataError(source, line_no, "expected header 'graph_id,class,f_0,...'");
            }
            width = fields.size();
            header = true;
            continue;
        }
        if (fields.size() != width) throw DataError(source, line_no, "row has " + std::to_string(fields.size()) +
                                                                         " fields, header has " + std::to_string(width));
        try {
            out.labels.push_back(std::stoi(fields[1]));
            std::vector<double> row;
            for (std::size_t j = 2; j < fields.size(); ++j) row.push_back(std::stod(fields[j]));
            out.rows.push_back(std::move(row));
        } catch (const std::logic_error&) {
            throw DataError(source, line_no, "malformed number in row");
        }
    }
    if (!header) throw DataError(source, line_no, "empty feature file");
    return out;
}

} // namespace fsf
