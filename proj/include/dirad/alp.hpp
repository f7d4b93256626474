#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dirad/dataset.hpp"
#include "dirad/distance.hpp"
#include "dirad/matrix.hpp"
#include "dirad/neighbours.hpp"

namespace dirad {

/// round(5.5 ln n), at least 1.
std::size_t default_alp_k(std::size_t n);
/// round(6 ln n), at least 1.
std::size_t default_alp_l(std::size_t n);

/// Weighted maximum: sum_i w_i * X^(i) with X^(i) the i-th largest value.
double wmax(std::span<const double> values, std::span<const double> weights);

struct AlpConfig {
    /// nullopt resolves to default_alp_k(n) clamped to n - 1.
    std::optional<std::size_t> k;
    /// nullopt resolves to default_alp_l(n) clamped to n.
    std::optional<std::size_t> l;
    DistanceVariant variant = DistanceVariant::absolute;
    double exponent_p = 1.0;
};

/// Average localised proximity. Compares the i-th nearest neighbour distance
/// of a query with the i-th nearest neighbour distances of the training
/// records around it, and returns a normality score in [0, 1].
class AlpModel {
public:
    /// `train` must be oriented and scaled. Signed variant is rejected.
    static AlpModel fit(const Dataset& train, const AlpConfig& cfg);

    AlpModel(Matrix train, std::vector<double> weights_k, std::vector<double> weights_l,
             DistanceSpec spec, Matrix train_nn_dists);

    /// lp_i(y) = D_i / (D_i + d_i), i in [1, k]. 0/0 is defined as 1.
    double localised_proximity(std::span<const double> y, std::size_t i) const;
    double normality_score(std::span<const double> y) const;
    double anomaly_score(std::span<const double> y) const { return 1.0 - normality_score(y); }

    std::vector<double> normality_scores(const Matrix& queries) const;
    std::vector<double> anomaly_scores(const Matrix& queries) const;

    std::size_t k() const noexcept { return weights_k_.size(); }
    std::size_t l() const noexcept { return weights_l_.size(); }
    const Matrix& train() const noexcept { return train_; }
    const std::vector<double>& weights_k() const noexcept { return weights_k_; }
    const std::vector<double>& weights_l() const noexcept { return weights_l_; }
    const DistanceSpec& spec() const noexcept { return spec_; }
    /// Row t holds the k self-excluded nearest neighbour distances of training record t.
    const Matrix& train_nn_dists() const noexcept { return train_nn_dists_; }

    friend bool operator==(const AlpModel&, const AlpModel&) = default;

private:
    void proximities(const NeighbourResult& nn, std::vector<double>& lp) const;
    void check_width(std::size_t width) const;

    Matrix train_;
    std::vector<double> weights_k_;
    std::vector<double> weights_l_;
    DistanceSpec spec_;
    Matrix train_nn_dists_;
};

}  // namespace dirad
