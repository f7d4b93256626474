#include "dirad/nnd.hpp"

#include <algorithm>
#include <functional>

#include "dirad/neighbours.hpp"

namespace dirad {

std::vector<double> linear_weights(std::size_t k) {
    if (k == 0) {
        throw ConfigError("linear_weights: k must be >= 1");
    }
    const double denom = static_cast<double>(k) * static_cast<double>(k + 1);
    std::vector<double> w(k);
    for (std::size_t i = 1; i <= k; ++i) {
        w[i - 1] = 2.0 * static_cast<double>(k + 1 - i) / denom;
    }
    return w;
}

NndModel NndModel::fit(const Dataset& train, const NndConfig& cfg) {
    for (const auto& a : train.schema()) {
        if (a.direction == Direction::low) {
            throw ConfigError("attribute '" + a.name + "' has direction low; orient the dataset first");
        }
    }
    if (train.size() == 0) {
        throw ConfigError("NND fit on an empty training set");
    }
    if (cfg.k == 0 || cfg.k > train.size()) {
        throw ConfigError("NND: k = " + std::to_string(cfg.k) + " exceeds training size " +
                          std::to_string(train.size()));
    }
    auto spec = spec_for_schema(train.schema(), cfg.variant, cfg.exponent_p);
    spec.validate();

    std::optional<std::vector<double>> sums;
    if (cfg.variant == DistanceVariant::signed_) {
        const auto& x = train.records();
        sums.emplace(x.rows(), 0.0);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < spec.size(); ++j) {
                if (spec.variants[j] == DistanceVariant::signed_) {
                    s += x(i, j);
                }
            }
            (*sums)[i] = s;
        }
        std::sort(sums->begin(), sums->end(), std::greater<>());
    }
    return NndModel(train.records(), linear_weights(cfg.k), std::move(spec), std::move(sums));
}

NndModel::NndModel(Matrix train, std::vector<double> weights, DistanceSpec spec,
                   std::optional<std::vector<double>> sorted_sums)
    : train_(std::move(train)),
      weights_(std::move(weights)),
      spec_(std::move(spec)),
      sorted_sums_(std::move(sorted_sums)) {
    spec_.validate();
    if (spec_.size() != train_.cols()) {
        throw DimensionError("NND model: spec width differs from training width");
    }
    if (weights_.empty() || weights_.size() > train_.rows()) {
        throw ConfigError("NND model: need 1 <= k <= n");
    }
    if (spec_.has_signed() && !sorted_sums_) {
        throw ConfigError("NND model: signed spec without attribute sums");
    }
    if (!sorted_sums_) {
        return;
    }
    if (sorted_sums_->size() != train_.rows() ||
        !std::is_sorted(sorted_sums_->begin(), sorted_sums_->end(), std::greater<>())) {
        throw ConfigError("NND model: attribute sums must be descending, one per record");
    }
    for (std::size_t j = 0; j < spec_.size(); ++j) {
        (spec_.variants[j] == DistanceVariant::signed_ ? directional_cols_ : adirectional_cols_)
            .push_back(j);
    }
    if (!adirectional_cols_.empty()) {
        adirectional_train_ = train_.select_cols(adirectional_cols_);
        adirectional_spec_ = DistanceSpec::uniform(adirectional_cols_.size(), DistanceVariant::absolute);
    }
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        weighted_top_sum_ += weights_[i] * (*sorted_sums_)[i];
    }
}

void NndModel::check_width(std::size_t width) const {
    if (width != train_.cols()) {
        throw DimensionError("NND query has " + std::to_string(width) + " attributes, model has " +
                             std::to_string(train_.cols()));
    }
}

double NndModel::weighted(std::span<const double> ascending) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        acc += weights_[i] * ascending[i];
    }
    return acc;
}

double NndModel::directional_sum(std::span<const double> y) const {
    double s = 0.0;
    for (auto j : directional_cols_) {
        s += y[j];
    }
    return s;
}

double NndModel::signed_risk(std::span<const double> y) const {
    if (!sorted_sums_) {
        throw ConfigError("signed_risk requires a signed NND model");
    }
    check_width(y.size());
    return directional_sum(y) - weighted_top_sum_;
}

double NndModel::raw_score(std::span<const double> y) const {
    check_width(y.size());
    if (!sorted_sums_) {
        return weighted(knn(train_, y, k(), spec_).distances);
    }
    double score = 0.0;
    if (!directional_cols_.empty()) {
        score = signed_risk(y);
    }
    if (!adirectional_cols_.empty()) {
        std::vector<double> proj;
        proj.reserve(adirectional_cols_.size());
        for (auto j : adirectional_cols_) {
            proj.push_back(y[j]);
        }
        score += weighted(knn(adirectional_train_, proj, k(), adirectional_spec_).distances);
    }
    return score;
}

std::vector<double> NndModel::raw_scores(const Matrix& queries) const {
    check_width(queries.cols());
    std::vector<double> out(queries.rows(), 0.0);
    if (!sorted_sums_) {
        const auto nn = knn_batch(train_, queries, k(), spec_);
        for (std::size_t i = 0; i < nn.size(); ++i) {
            out[i] = weighted(nn[i].distances);
        }
        return out;
    }
    if (!directional_cols_.empty()) {
        for (std::size_t i = 0; i < queries.rows(); ++i) {
            out[i] = directional_sum(queries.row(i)) - weighted_top_sum_;
        }
    }
    if (!adirectional_cols_.empty()) {
        const auto nn = knn_batch(adirectional_train_, queries.select_cols(adirectional_cols_), k(),
                                  adirectional_spec_);
        for (std::size_t i = 0; i < nn.size(); ++i) {
            out[i] += weighted(nn[i].distances);
        }
    }
    return out;
}

std::vector<double> NndModel::anomaly_scores(const Matrix& queries) const {
    auto out = raw_scores(queries);
    std::transform(out.begin(), out.end(), out.begin(), contract_score);
    return out;
}

}  // namespace dirad
