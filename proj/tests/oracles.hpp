#pragma once

// Reference computations used only by tests. They deliberately avoid the
// library's kernels: each one recomputes from definitions with plain loops.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "dirad/dataset.hpp"
#include "dirad/distance.hpp"

namespace oracle {

inline double per_axis(double diff, dirad::DistanceVariant v) {
    if (v == dirad::DistanceVariant::absolute) return std::fabs(diff);
    if (v == dirad::DistanceVariant::ramp) return std::max(0.0, diff);
    return diff;
}

inline double distance(const std::vector<double>& y, const std::vector<double>& x,
                       const std::vector<dirad::DistanceVariant>& v) {
    double s = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
        s += per_axis(y[j] - x[j], v[j]);
    }
    return s;
}

inline std::vector<double> row(const dirad::Matrix& m, std::size_t i) {
    const auto r = m.row(i);
    return {r.begin(), r.end()};
}

/// Full sort of (distance, index) pairs, optionally skipping one index.
inline std::vector<std::pair<double, std::size_t>> sorted_neighbours(
    const dirad::Matrix& train, const std::vector<double>& y,
    const std::vector<dirad::DistanceVariant>& v, std::size_t skip = SIZE_MAX) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t t = 0; t < train.rows(); ++t) {
        if (t != skip) {
            all.emplace_back(distance(y, row(train, t), v), t);
        }
    }
    std::sort(all.begin(), all.end());
    return all;
}

inline std::vector<double> weights(std::size_t k) {
    // Linearly descending k, k-1, ..., 1, normalised.
    std::vector<double> w(k);
    for (std::size_t i = 0; i < k; ++i) w[i] = static_cast<double>(k - i);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= total;
    return w;
}

/// Weighted NND straight from the definition: all distances, sort, weight.
inline double weighted_nnd(const dirad::Matrix& train, const std::vector<double>& y,
                           const std::vector<dirad::DistanceVariant>& v, std::size_t k) {
    const auto nn = sorted_neighbours(train, y, v);
    const auto w = weights(k);
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += w[i] * nn[i].first;
    return s;
}

/// AUROC by counting every (anomaly, normal) pair.
inline double pairwise_auroc(const std::vector<double>& s, const std::vector<dirad::Label>& l) {
    double wins = 0.0;
    double na = 0.0;
    double nn = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (l[i] == dirad::Label::anomalous) na += 1; else nn += 1;
    }
    for (std::size_t a = 0; a < s.size(); ++a) {
        if (l[a] != dirad::Label::anomalous) continue;
        for (std::size_t b = 0; b < s.size(); ++b) {
            if (l[b] != dirad::Label::normal) continue;
            if (s[a] > s[b]) wins += 1.0;
            else if (s[a] == s[b]) wins += 0.5;
        }
    }
    return wins / (na * nn);
}

/// P(W+ >= observed) by enumerating all 2^n sign assignments of ranks 1..n.
inline double enumerate_signed_rank_p(std::size_t n, double observed) {
    std::uint64_t hits = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double w = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            if (mask & (std::uint64_t{1} << r)) w += static_cast<double>(r + 1);
        }
        if (w >= observed) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

inline dirad::Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                   double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    dirad::Matrix m(rows, cols);
    for (auto& x : m.data()) x = u(rng);
    return m;
}

inline std::vector<dirad::AttributeSpec> schema(std::size_t directional, std::size_t adirectional) {
    std::vector<dirad::AttributeSpec> s;
    for (std::size_t j = 0; j < directional; ++j) s.push_back({"d" + std::to_string(j), dirad::Direction::high});
    for (std::size_t j = 0; j < adirectional; ++j) s.push_back({"a" + std::to_string(j), dirad::Direction::none});
    return s;
}

}  // namespace oracle
