#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dirad/distance.hpp"
#include "dirad/matrix.hpp"

namespace dirad {

/// k nearest training rows of one query, nearest first.
struct NeighbourResult {
    std::vector<double> distances;
    std::vector<std::size_t> indices;

    std::size_t size() const noexcept { return distances.size(); }
    friend bool operator==(const NeighbourResult&, const NeighbourResult&) = default;
};

/// Exact brute-force k-NN. Ties in distance go to the lower row index.
NeighbourResult knn(const Matrix& train, std::span<const double> query, std::size_t k,
                    const DistanceSpec& spec);

/// knn for every query row, parallel over queries.
std::vector<NeighbourResult> knn_batch(const Matrix& train, const Matrix& queries,
                                       std::size_t k, const DistanceSpec& spec);
std::vector<NeighbourResult> knn_batch_serial(const Matrix& train, const Matrix& queries,
                                              std::size_t k, const DistanceSpec& spec);

/// For every training row, its k nearest other training rows (self excluded).
/// Requires k <= n - 1.
std::vector<NeighbourResult> self_knn(const Matrix& train, std::size_t k, const DistanceSpec& spec);
std::vector<NeighbourResult> self_knn_serial(const Matrix& train, std::size_t k,
                                             const DistanceSpec& spec);

namespace detail {

/// Selects the k smallest entries of `dist` (skipping `exclude`), ordered by
/// (distance, index). `order` is scratch space.
NeighbourResult select_k(std::span<const double> dist, std::size_t k, std::size_t exclude,
                         std::vector<std::size_t>& order);

}  // namespace detail

}  // namespace dirad
