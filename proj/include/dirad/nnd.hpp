#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dirad/dataset.hpp"
#include "dirad/distance.hpp"
#include "dirad/matrix.hpp"

namespace dirad {

/// w_i = 2(k+1-i) / (k(k+1)), i = 1..k. Strictly decreasing, sums to 1.
std::vector<double> linear_weights(std::size_t k);

/// Maps a raw score onto (0, 1): a -> a / (2(|a| + 1)) + 1/2. Strictly increasing.
constexpr double contract_score(double a) noexcept {
    return 0.5 * (a / ((a < 0.0 ? -a : a) + 1.0)) + 0.5;
}

struct NndConfig {
    std::size_t k = 8;
    /// Applied to directional attributes; adirectional ones always use absolute.
    DistanceVariant variant = DistanceVariant::absolute;
    double exponent_p = 1.0;
};

/// Weighted nearest neighbour distance detector.
///
/// Absolute and ramp variants score a query by the weighted average of its k
/// nearest training distances. The signed variant never queries neighbours
/// on directional attributes: the nearest records under signed distance are
/// those with the largest directional attribute sums regardless of the query,
/// so the score reduces to comparing sums. Adirectional attributes, when
/// present, add a separate absolute-distance weighted NND term.
class NndModel {
public:
    /// `train` must be oriented (no low-direction attributes) and scaled.
    static NndModel fit(const Dataset& train, const NndConfig& cfg);

    /// Reassembles a fitted model; used by deserialization.
    NndModel(Matrix train, std::vector<double> weights, DistanceSpec spec,
             std::optional<std::vector<double>> sorted_sums);

    double raw_score(std::span<const double> y) const;
    /// Directional part of the signed score: sum_i w_i (S_y - S_(i)).
    double signed_risk(std::span<const double> y) const;
    double anomaly_score(std::span<const double> y) const { return contract_score(raw_score(y)); }

    std::vector<double> raw_scores(const Matrix& queries) const;
    std::vector<double> anomaly_scores(const Matrix& queries) const;

    const Matrix& train() const noexcept { return train_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    const DistanceSpec& spec() const noexcept { return spec_; }
    const std::optional<std::vector<double>>& sorted_sums() const noexcept { return sorted_sums_; }
    std::size_t k() const noexcept { return weights_.size(); }
    bool is_signed() const noexcept { return sorted_sums_.has_value(); }

    friend bool operator==(const NndModel& a, const NndModel& b) {
        return a.train_ == b.train_ && a.weights_ == b.weights_ && a.spec_ == b.spec_ &&
               a.sorted_sums_ == b.sorted_sums_;
    }

private:
    double directional_sum(std::span<const double> y) const;
    double weighted(std::span<const double> ascending) const;
    void check_width(std::size_t width) const;

    Matrix train_;
    std::vector<double> weights_;
    DistanceSpec spec_;
    std::optional<std::vector<double>> sorted_sums_;

    // Derived from spec_ for the signed composition.
    std::vector<std::size_t> directional_cols_;
    std::vector<std::size_t> adirectional_cols_;
    Matrix adirectional_train_;
    DistanceSpec adirectional_spec_;
    double weighted_top_sum_ = 0.0;
};

}  // namespace dirad
