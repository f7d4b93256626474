#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dirad/dataset.hpp"
#include "dirad/matrix.hpp"

namespace dirad {

/// Per-attribute treatment of the difference y_j - x_j.
enum class DistanceVariant : std::uint8_t { absolute, ramp, signed_ };

std::string_view to_string(DistanceVariant v) noexcept;
DistanceVariant parse_variant(std::string_view text);

/// Per-attribute variants plus the Minkowski exponent used to aggregate them.
struct DistanceSpec {
    std::vector<DistanceVariant> variants;
    double exponent_p = 1.0;

    std::size_t size() const noexcept { return variants.size(); }
    bool has_signed() const noexcept;
    /// Throws ConfigError if p < 1, p is not finite, or signed is used with p != 1.
    void validate() const;

    /// Every attribute with the same variant.
    static DistanceSpec uniform(std::size_t m, DistanceVariant v, double p = 1.0);

    friend bool operator==(const DistanceSpec&, const DistanceSpec&) = default;
};

/// `directional` for high/low attributes, absolute for adirectional ones.
DistanceSpec spec_for_schema(const std::vector<AttributeSpec>& schema,
                             DistanceVariant directional, double p = 1.0);

constexpr double per_attribute(double diff, DistanceVariant v) noexcept {
    switch (v) {
        case DistanceVariant::absolute: return diff < 0.0 ? -diff : diff;
        case DistanceVariant::ramp: return diff > 0.0 ? diff : 0.0;
        case DistanceVariant::signed_: return diff;
    }
    return diff;
}

/// Unchecked kernel shared by the scalar and batch entry points; the spec is
/// assumed validated and dimensions equal.
inline double record_distance_unchecked(const double* y, const double* x,
                                        const DistanceVariant* variants, std::size_t m,
                                        double p) noexcept {
    double acc = 0.0;
    if (p == 1.0) {
        for (std::size_t j = 0; j < m; ++j) {
            acc += per_attribute(y[j] - x[j], variants[j]);
        }
        return acc;
    }
    for (std::size_t j = 0; j < m; ++j) {
        acc += std::pow(per_attribute(y[j] - x[j], variants[j]), p);
    }
    return std::pow(acc, 1.0 / p);
}

/// d(y, x): sum of per-attribute distances at p = 1, Minkowski aggregate
/// otherwise. Asymmetric for ramp and signed variants.
double record_distance(std::span<const double> y, std::span<const double> x,
                       const DistanceSpec& spec);

/// Entry (i, j) = record_distance(queries[i], train[j]). Rows computed in
/// parallel; every entry is bit-identical to the scalar call.
Matrix distance_matrix(const Matrix& queries, const Matrix& train, const DistanceSpec& spec);

/// Single-threaded reference for distance_matrix.
Matrix distance_matrix_serial(const Matrix& queries, const Matrix& train,
                              const DistanceSpec& spec);

}  // namespace dirad
