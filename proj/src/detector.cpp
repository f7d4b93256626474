#include "dirad/detector.hpp"

#include <cmath>

namespace dirad {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string detector_name(const DetectorConfig& cfg) {
    return std::holds_alternative<NndConfig>(cfg) ? "nnd" : "alp";
}

DistanceVariant detector_variant(const DetectorConfig& cfg) {
    return std::visit([](const auto& c) { return c.variant; }, cfg);
}

void validate(const DetectorConfig& cfg) {
    std::visit(overloaded{
                   [](const NndConfig& c) {
                       if (c.k == 0) throw ConfigError("NND: k must be >= 1");
                       DistanceSpec::uniform(1, c.variant, c.exponent_p).validate();
                   },
                   [](const AlpConfig& c) {
                       if (c.variant == DistanceVariant::signed_) {
                           throw ConfigError("ALP does not support the signed distance variant");
                       }
                       if ((c.k && *c.k == 0) || (c.l && *c.l == 0)) {
                           throw ConfigError("ALP: k and l must be >= 1");
                       }
                       DistanceSpec::uniform(1, c.variant, c.exponent_p).validate();
                   },
               },
               cfg);
}

Detector Detector::fit(const Dataset& scaled_train, const DetectorConfig& cfg) {
    validate(cfg);
    return std::visit(overloaded{
                          [&](const NndConfig& c) { return Detector(NndModel::fit(scaled_train, c)); },
                          [&](const AlpConfig& c) { return Detector(AlpModel::fit(scaled_train, c)); },
                      },
                      cfg);
}

std::vector<double> Detector::anomaly_scores(const Matrix& queries) const {
    return std::visit([&](const auto& m) { return m.anomaly_scores(queries); }, model_);
}

std::size_t Detector::attribute_count() const noexcept {
    return std::visit([](const auto& m) { return m.train().cols(); }, model_);
}

Pipeline::Pipeline(std::vector<AttributeSpec> schema, ScalingParams scaler, Detector detector)
    : schema_(std::move(schema)), scaler_(std::move(scaler)), detector_(std::move(detector)) {
    const std::size_t m = schema_.size();
    if (scaler_.midhinge.size() != m || scaler_.semi_iqr.size() != m ||
        detector_.attribute_count() != m) {
        throw DimensionError("pipeline parts disagree on the attribute count");
    }
}

Pipeline Pipeline::fit(const Dataset& raw_train, const DetectorConfig& cfg, bool scale) {
    validate(cfg);
    const Dataset oriented = orient(Dataset(raw_train.schema(), raw_train.records()));
    ScalingParams scaler =
        scale ? fit_scaler(oriented) : ScalingParams::identity(oriented.attribute_count());
    const Dataset scaled = apply_scaler(oriented, scaler);
    return Pipeline(raw_train.schema(), std::move(scaler), Detector::fit(scaled, cfg));
}

Dataset Pipeline::transform(const Dataset& raw) const {
    if (raw.schema() != schema_) {
        throw DimensionError("query schema does not match the fitted model's schema");
    }
    return apply_scaler(orient(raw), scaler_);
}

std::vector<double> Pipeline::score(const Dataset& raw) const {
    return detector_.anomaly_scores(transform(raw).records());
}

}  // namespace dirad
