#include "dirad/neighbours.hpp"

#include <algorithm>
#include <numeric>

namespace dirad {

namespace detail {

NeighbourResult select_k(std::span<const double> dist, std::size_t k, std::size_t exclude,
                         std::vector<std::size_t>& order) {
    order.clear();
    for (std::size_t t = 0; t < dist.size(); ++t) {
        if (t != exclude) {
            order.push_back(t);
        }
    }
    const auto closer = [&](std::size_t a, std::size_t b) {
        return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
    };
    const auto mid = order.begin() + static_cast<std::ptrdiff_t>(k);
    if (k < order.size()) {
        std::nth_element(order.begin(), mid, order.end(), closer);
    }
    std::sort(order.begin(), mid, closer);

    NeighbourResult out;
    out.distances.reserve(k);
    out.indices.assign(order.begin(), mid);
    for (auto t : out.indices) {
        out.distances.push_back(dist[t]);
    }
    return out;
}

}  // namespace detail

namespace {

constexpr std::size_t kNoExclusion = static_cast<std::size_t>(-1);

void check_query(const Matrix& train, std::size_t width, std::size_t k, std::size_t limit,
                 const DistanceSpec& spec) {
    if (width != train.cols() || spec.size() != train.cols()) {
        throw DimensionError("knn: query width " + std::to_string(width) + ", train width " +
                             std::to_string(train.cols()) + ", spec " +
                             std::to_string(spec.size()));
    }
    if (k == 0 || k > limit) {
        throw ConfigError("knn: k = " + std::to_string(k) + " outside [1, " +
                          std::to_string(limit) + "]");
    }
    spec.validate();
}

void fill_row(const Matrix& train, const double* y, const DistanceSpec& spec,
              std::vector<double>& dist) {
    dist.resize(train.rows());
    for (std::size_t t = 0; t < train.rows(); ++t) {
        dist[t] = record_distance_unchecked(y, train.row(t).data(), spec.variants.data(),
                                            spec.size(), spec.exponent_p);
    }
}

std::size_t self_limit(const Matrix& train) {
    return train.rows() == 0 ? 0 : train.rows() - 1;
}

}  // namespace

NeighbourResult knn(const Matrix& train, std::span<const double> query, std::size_t k,
                    const DistanceSpec& spec) {
    check_query(train, query.size(), k, train.rows(), spec);
    std::vector<double> dist;
    std::vector<std::size_t> order;
    fill_row(train, query.data(), spec, dist);
    return detail::select_k(dist, k, kNoExclusion, order);
}

std::vector<NeighbourResult> knn_batch(const Matrix& train, const Matrix& queries,
                                       std::size_t k, const DistanceSpec& spec) {
    check_query(train, queries.cols(), k, train.rows(), spec);
    std::vector<NeighbourResult> out(queries.rows());
    const auto q = static_cast<std::ptrdiff_t>(queries.rows());

    #pragma omp parallel
    {
        std::vector<double> dist;
        std::vector<std::size_t> order;
        #pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t i = 0; i < q; ++i) {
            const auto row = static_cast<std::size_t>(i);
            fill_row(train, queries.row(row).data(), spec, dist);
            out[row] = detail::select_k(dist, k, kNoExclusion, order);
        }
    }
    return out;
}

std::vector<NeighbourResult> knn_batch_serial(const Matrix& train, const Matrix& queries,
                                              std::size_t k, const DistanceSpec& spec) {
    std::vector<NeighbourResult> out;
    out.reserve(queries.rows());
    for (std::size_t i = 0; i < queries.rows(); ++i) {
        out.push_back(knn(train, queries.row(i), k, spec));
    }
    return out;
}

std::vector<NeighbourResult> self_knn(const Matrix& train, std::size_t k,
                                      const DistanceSpec& spec) {
    check_query(train, train.cols(), k, self_limit(train), spec);
    std::vector<NeighbourResult> out(train.rows());
    const auto n = static_cast<std::ptrdiff_t>(train.rows());

    #pragma omp parallel
    {
        std::vector<double> dist;
        std::vector<std::size_t> order;
        #pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const auto row = static_cast<std::size_t>(i);
            fill_row(train, train.row(row).data(), spec, dist);
            out[row] = detail::select_k(dist, k, row, order);
        }
    }
    return out;
}

std::vector<NeighbourResult> self_knn_serial(const Matrix& train, std::size_t k,
                                             const DistanceSpec& spec) {
    check_query(train, train.cols(), k, self_limit(train), spec);
    std::vector<NeighbourResult> out;
    out.reserve(train.rows());
    std::vector<double> dist(train.rows());
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < train.rows(); ++i) {
        for (std::size_t t = 0; t < train.rows(); ++t) {
            dist[t] = record_distance(train.row(i), train.row(t), spec);
        }
        out.push_back(detail::select_k(dist, k, i, order));
    }
    return out;
}

}  // namespace dirad
