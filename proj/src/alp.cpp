#include "dirad/alp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "dirad/nnd.hpp"

namespace dirad {

namespace {

std::size_t log_default(double factor, std::size_t n) {
    if (n < 2) {
        throw ConfigError("ALP defaults need n >= 2");
    }
    const auto v = std::llround(factor * std::log(static_cast<double>(n)));
    return static_cast<std::size_t>(std::max<long long>(1, v));
}

}  // namespace

std::size_t default_alp_k(std::size_t n) { return log_default(5.5, n); }
std::size_t default_alp_l(std::size_t n) { return log_default(6.0, n); }

double wmax(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size()) {
        throw DimensionError("wmax: " + std::to_string(values.size()) + " values for " +
                             std::to_string(weights.size()) + " weights");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double acc = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        acc += weights[i] * sorted[i];
    }
    return acc;
}

AlpModel AlpModel::fit(const Dataset& train, const AlpConfig& cfg) {
    if (cfg.variant == DistanceVariant::signed_) {
        throw ConfigError("ALP does not support the signed distance variant");
    }
    for (const auto& a : train.schema()) {
        if (a.direction == Direction::low) {
            throw ConfigError("attribute '" + a.name + "' has direction low; orient the dataset first");
        }
    }
    const std::size_t n = train.size();
    if (n < 2) {
        throw ConfigError("ALP needs at least 2 training records");
    }
    const std::size_t k = cfg.k.value_or(std::min(default_alp_k(n), n - 1));
    const std::size_t l = cfg.l.value_or(std::min(default_alp_l(n), n));
    if (k == 0 || k > n - 1) {
        throw ConfigError("ALP: k = " + std::to_string(k) + " outside [1, " + std::to_string(n - 1) + "]");
    }
    if (l == 0 || l > n) {
        throw ConfigError("ALP: l = " + std::to_string(l) + " outside [1, " + std::to_string(n) + "]");
    }
    auto spec = spec_for_schema(train.schema(), cfg.variant, cfg.exponent_p);
    const auto nn = self_knn(train.records(), k, spec);
    Matrix table(n, k);
    for (std::size_t t = 0; t < n; ++t) {
        std::copy(nn[t].distances.begin(), nn[t].distances.end(), table.row(t).begin());
    }
    return AlpModel(train.records(), linear_weights(k), linear_weights(l), std::move(spec),
                    std::move(table));
}

AlpModel::AlpModel(Matrix train, std::vector<double> weights_k, std::vector<double> weights_l,
                   DistanceSpec spec, Matrix train_nn_dists)
    : train_(std::move(train)),
      weights_k_(std::move(weights_k)),
      weights_l_(std::move(weights_l)),
      spec_(std::move(spec)),
      train_nn_dists_(std::move(train_nn_dists)) {
    spec_.validate();
    if (spec_.has_signed()) {
        throw ConfigError("ALP does not support the signed distance variant");
    }
    if (spec_.size() != train_.cols()) {
        throw DimensionError("ALP model: spec width differs from training width");
    }
    const std::size_t n = train_.rows();
    if (weights_k_.empty() || weights_k_.size() + 1 > n || weights_l_.empty() || weights_l_.size() > n) {
        throw ConfigError("ALP model: need 1 <= k <= n - 1 and 1 <= l <= n");
    }
    if (train_nn_dists_.rows() != n || train_nn_dists_.cols() != weights_k_.size()) {
        throw DimensionError("ALP model: neighbour table must be n x k");
    }
}

void AlpModel::check_width(std::size_t width) const {
    if (width != train_.cols()) {
        throw DimensionError("ALP query has " + std::to_string(width) + " attributes, model has " +
                             std::to_string(train_.cols()));
    }
}

void AlpModel::proximities(const NeighbourResult& nn, std::vector<double>& lp) const {
    lp.resize(k());
    for (std::size_t i = 0; i < k(); ++i) {
        double local = 0.0;
        for (std::size_t j = 0; j < l(); ++j) {
            local += weights_l_[j] * train_nn_dists_(nn.indices[j], i);
        }
        const double own = nn.distances[i];
        const double denom = local + own;
        lp[i] = denom > 0.0 ? local / denom : 1.0;
    }
}

double AlpModel::localised_proximity(std::span<const double> y, std::size_t i) const {
    check_width(y.size());
    if (i == 0 || i > k()) {
        throw ConfigError("localised_proximity: i = " + std::to_string(i) + " outside [1, " +
                          std::to_string(k()) + "]");
    }
    std::vector<double> lp;
    proximities(knn(train_, y, std::max(k(), l()), spec_), lp);
    return lp[i - 1];
}

double AlpModel::normality_score(std::span<const double> y) const {
    check_width(y.size());
    std::vector<double> lp;
    proximities(knn(train_, y, std::max(k(), l()), spec_), lp);
    return wmax(lp, weights_k_);
}

std::vector<double> AlpModel::normality_scores(const Matrix& queries) const {
    check_width(queries.cols());
    const auto nn = knn_batch(train_, queries, std::max(k(), l()), spec_);
    std::vector<double> out(queries.rows());
    std::vector<double> lp;
    for (std::size_t i = 0; i < nn.size(); ++i) {
        proximities(nn[i], lp);
        out[i] = wmax(lp, weights_k_);
    }
    return out;
}

std::vector<double> AlpModel::anomaly_scores(const Matrix& queries) const {
    auto out = normality_scores(queries);
    for (auto& v : out) {
        v = 1.0 - v;
    }
    return out;
}

}  // namespace dirad
