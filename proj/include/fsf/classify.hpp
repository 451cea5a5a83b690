#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fsf/errors.hpp"
#include "fsf/parallel.hpp"
#include "fsf/random.hpp"

namespace fsf {

struct CVConfig {
    std::size_t k_neighbors = 5;
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    bool shuffle_labels = false;
    unsigned threads = 1;
};

struct CVReport {
    std::vector<double> fold_accuracies;
    double mean = 0.0;
    double stddev = 0.0;
    CVConfig config;
    std::size_t feature_count = 0;
};

/// Stratified fold index per row. Within each class (ascending class id) the
/// members are shuffled, then dealt round-robin with one counter that runs
/// across classes, so fold sizes differ by at most one overall and per class.
inline std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t folds, std::uint64_t seed) {
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
    for (const auto& [cls, rows] : members) {
        if (rows.size() < folds) {
            throw DataError("class " + std::to_string(cls) + " has " + std::to_string(rows.size()) +
                            " members, fewer than " + std::to_string(folds) + " folds");
        }
    }
    Rng rng(seed);
    std::vector<std::size_t> fold(labels.size());
    std::size_t counter = 0;
    for (auto& [cls, rows] : members) {
        shuffle(std::span<std::size_t>(rows), rng);
        for (std::size_t r : rows) fold[r] = counter++ % folds;
    }
    return fold;
}

/// Sorted row indices of a class-stratified sample of size n: quotas are
/// proportional to class size (largest remainder, ties to the smaller class
/// id) and members within a class are drawn by a seeded shuffle.
inline std::vector<std::size_t> stratified_subset(std::span<const int> labels, std::size_t n, std::uint64_t seed) {
    if (n >= labels.size()) {
        std::vector<std::size_t> all(labels.size());
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
    std::vector<std::pair<double, int>> remainders;
    std::map<int, std::size_t> quota;
    std::size_t assigned = 0;
    for (const auto& [cls, rows] : members) {
        const double exact = static_cast<double>(n) * static_cast<double>(rows.size()) / static_cast<double>(labels.size());
        quota[cls] = static_cast<std::size_t>(exact);
        assigned += quota[cls];
        remainders.emplace_back(-(exact - static_cast<double>(quota[cls])), cls);
    }
    std::sort(remainders.begin(), remainders.end());
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++quota[remainders[i].second];
    Rng rng(seed);
    std::vector<std::size_t> out;
    for (auto& [cls, rows] : members) {
        shuffle(std::span<std::size_t>(rows), rng);
        out.insert(out.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(quota[cls]));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Per-column z-score parameters fitted on a subset of rows.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const std::vector<std::vector<double>>& rows, std::span<const std::size_t> subset) {
        const std::size_t width = rows.empty() ? 0 : rows.front().size();
        Standardizer s{std::vector<double>(width, 0.0), std::vector<double>(width, 0.0)};
        if (subset.empty()) {
            std::fill(s.scale.begin(), s.scale.end(), 1.0);
            return s;
        }
        for (std::size_t r : subset) {
            for (std::size_t j = 0; j < width; ++j) s.mean[j] += rows[r][j];
        }
        for (auto& m : s.mean) m /= static_cast<double>(subset.size());
        for (std::size_t r : subset) {
            for (std::size_t j = 0; j < width; ++j) s.scale[j] += (rows[r][j] - s.mean[j]) * (rows[r][j] - s.mean[j]);
        }
        for (auto& v : s.scale) {
            v = std::sqrt(v / static_cast<double>(subset.size()));
            if (v == 0.0) v = 1.0;
        }
        return s;
    }

    std::vector<double> apply(const std::vector<double>& row) const {
        std::vector<double> out(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / scale[j];
        return out;
    }
};

/// Majority vote among the k nearest training rows (Euclidean). Distance
/// ties go to the lower row index; vote ties go to the class whose nearest
/// member is closest.
inline int knn_predict(const std::vector<std::vector<double>>& train, std::span<const int> train_labels,
                       const std::vector<double>& query, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> dist(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        double d = 0.0;
        for (std::size_t j = 0; j < query.size(); ++j) d += (train[i][j] - query[j]) * (train[i][j] - query[j]);
        dist[i] = {d, i};
    }
    k = std::min(k, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::map<int, std::pair<std::size_t, std::size_t>> votes; // class -> (count, rank of nearest member)
    for (std::size_t r = 0; r < k; ++r) {
        auto [it, inserted] = votes.emplace(train_labels[dist[r].second], std::pair{0, r});
        ++it->second.first;
    }
    int best = votes.begin()->first;
    for (const auto& [cls, v] : votes) {
        const auto& b = votes.at(best);
        if (v.first > b.first || (v.first == b.first && v.second < b.second)) best = cls;
    }
    return best;
}

/// Stratified k-fold cross-validation of a k-nearest-neighbor classifier on
/// z-scored features (scaler fitted on the training fold only).
inline CVReport knn_cross_validate(const std::vector<std::vector<double>>& features, std::vector<int> labels,
                                   const CVConfig& config) {
    if (features.size() != labels.size()) throw ConfigError("feature and label counts differ");
    if (config.folds < 2) throw ConfigError("need at least 2 folds");
    if (config.k_neighbors < 1) throw ConfigError("need at least 1 neighbor");
    if (features.size() < config.folds) throw ConfigError("fewer rows than folds");
    const std::size_t width = features.front().size();
    for (const auto& r : features) {
        if (r.size() != width) throw DataError("feature rows have different lengths");
    }

    if (config.shuffle_labels) {
        Rng rng(config.seed ^ 0x5eed5eed5eed5eedULL);
        shuffle(std::span<int>(labels), rng);
    }
    const auto fold_of = stratified_folds(labels, config.folds, config.seed);

    CVReport report;
    report.config = config;
    report.feature_count = width;
    report.fold_accuracies.assign(config.folds, 0.0);
    parallel_for(config.folds, config.threads, [&](std::size_t f) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < features.size(); ++i) (fold_of[i] == f ? test_idx : train_idx).push_back(i);
        const Standardizer scaler = Standardizer::fit(features, train_idx);
        std::vector<std::vector<double>> train;
        std::vector<int> train_labels;
        for (std::size_t i : train_idx) {
            train.push_back(scaler.apply(features[i]));
            train_labels.push_back(labels[i]);
        }
        std::size_t correct = 0;
        for (std::size_t i : test_idx) {
            if (knn_predict(train, train_labels, scaler.apply(features[i]), config.k_neighbors) == labels[i]) ++correct;
        }
        report.fold_accuracies[f] = static_cast<double>(correct) / static_cast<double>(test_idx.size());
    });
    const auto n = static_cast<double>(config.folds);
    report.mean = std::accumulate(report.fold_accuracies.begin(), report.fold_accuracies.end(), 0.0) / n;
    double var = 0.0;
    for (double a : report.fold_accuracies) var += (a - report.mean) * (a - report.mean);
    report.stddev = std::sqrt(var / n);
    return report;
}

} // namespace fsf
