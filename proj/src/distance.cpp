#include "dirad/distance.hpp"

#include <algorithm>

namespace dirad {

std::string_view to_string(DistanceVariant v) noexcept {
    switch (v) {
        case DistanceVariant::absolute: return "absolute";
        case DistanceVariant::ramp: return "ramp";
        case DistanceVariant::signed_: return "signed";
    }
    return "absolute";
}

DistanceVariant parse_variant(std::string_view text) {
    if (text == "absolute") return DistanceVariant::absolute;
    if (text == "ramp") return DistanceVariant::ramp;
    if (text == "signed") return DistanceVariant::signed_;
    throw ConfigError("unknown distance variant '" + std::string(text) +
                      "' (expected absolute, ramp or signed)");
}

bool DistanceSpec::has_signed() const noexcept {
    return std::find(variants.begin(), variants.end(), DistanceVariant::signed_) != variants.end();
}

void DistanceSpec::validate() const {
    if (!std::isfinite(exponent_p) || exponent_p < 1.0) {
        throw ConfigError("Minkowski exponent must be finite and >= 1");
    }
    if (exponent_p != 1.0 && has_signed()) {
        throw ConfigError("signed distance is only defined for p = 1");
    }
}

DistanceSpec DistanceSpec::uniform(std::size_t m, DistanceVariant v, double p) {
    return {std::vector<DistanceVariant>(m, v), p};
}

DistanceSpec spec_for_schema(const std::vector<AttributeSpec>& schema,
                             DistanceVariant directional, double p) {
    DistanceSpec spec;
    spec.exponent_p = p;
    spec.variants.reserve(schema.size());
    for (const auto& a : schema) {
        spec.variants.push_back(a.direction == Direction::none ? DistanceVariant::absolute
                                                               : directional);
    }
    return spec;
}

double record_distance(std::span<const double> y, std::span<const double> x,
                       const DistanceSpec& spec) {
    if (y.size() != x.size() || y.size() != spec.size()) {
        throw DimensionError("record_distance: dimensions " + std::to_string(y.size()) + ", " +
                             std::to_string(x.size()) + " and spec " +
                             std::to_string(spec.size()) + " differ");
    }
    spec.validate();
    return record_distance_unchecked(y.data(), x.data(), spec.variants.data(), spec.size(),
                                     spec.exponent_p);
}

namespace {

void check_batch(const Matrix& queries, const Matrix& train, const DistanceSpec& spec) {
    if (queries.cols() != spec.size() || train.cols() != spec.size()) {
        throw DimensionError("distance_matrix: query width " + std::to_string(queries.cols()) +
                             ", train width " + std::to_string(train.cols()) + ", spec " +
                             std::to_string(spec.size()));
    }
    spec.validate();
}

}  // namespace

Matrix distance_matrix(const Matrix& queries, const Matrix& train, const DistanceSpec& spec) {
    check_batch(queries, train, spec);
    Matrix out(queries.rows(), train.rows());
    const auto q = static_cast<std::ptrdiff_t>(queries.rows());
    const std::size_t n = train.rows();
    const std::size_t m = spec.size();
    const DistanceVariant* variants = spec.variants.data();
    const double p = spec.exponent_p;

    #pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < q; ++i) {
        const double* y = queries.row(static_cast<std::size_t>(i)).data();
        double* dst = out.row(static_cast<std::size_t>(i)).data();
        for (std::size_t t = 0; t < n; ++t) {
            dst[t] = record_distance_unchecked(y, train.row(t).data(), variants, m, p);
        }
    }
    return out;
}

Matrix distance_matrix_serial(const Matrix& queries, const Matrix& train,
                              const DistanceSpec& spec) {
    check_batch(queries, train, spec);
    Matrix out(queries.rows(), train.rows());
    for (std::size_t i = 0; i < queries.rows(); ++i) {
        for (std::size_t t = 0; t < train.rows(); ++t) {
            out(i, t) = record_distance(queries.row(i), train.row(t), spec);
        }
    }
    return out;
}

}  // namespace dirad
