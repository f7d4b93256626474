#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "dirad/alp.hpp"
#include "dirad/dataset.hpp"
#include "dirad/nnd.hpp"

namespace dirad {

using DetectorConfig = std::variant<NndConfig, AlpConfig>;

/// "nnd" or "alp".
std::string detector_name(const DetectorConfig& cfg);
DistanceVariant detector_variant(const DetectorConfig& cfg);
/// Rejects combinations with no defined meaning (signed ALP, k = 0, p < 1).
void validate(const DetectorConfig& cfg);

/// A fitted NND or ALP model behind one scoring interface. Scores are
/// higher-is-more-anomalous and lie in [0, 1]: contracted raw score for NND,
/// 1 - normality for ALP.
class Detector {
public:
    using Model = std::variant<NndModel, AlpModel>;

    explicit Detector(Model model) : model_(std::move(model)) {}

    static Detector fit(const Dataset& scaled_train, const DetectorConfig& cfg);

    std::vector<double> anomaly_scores(const Matrix& queries) const;
    const Model& model() const noexcept { return model_; }
    std::size_t attribute_count() const noexcept;

    friend bool operator==(const Detector&, const Detector&) = default;

private:
    Model model_;
};

/// Orientation, robust scaling and a detector, fitted together on raw normal
/// training records and applied together to raw queries.
class Pipeline {
public:
    Pipeline(std::vector<AttributeSpec> schema, ScalingParams scaler, Detector detector);

    /// Orients `raw_train`, fits the scaler on it (identity when `scale` is
    /// false), scales, and fits the detector. Labels, if any, are ignored.
    static Pipeline fit(const Dataset& raw_train, const DetectorConfig& cfg, bool scale = true);

    /// Oriented and scaled copy of `raw`. Throws if its schema differs.
    Dataset transform(const Dataset& raw) const;
    std::vector<double> score(const Dataset& raw) const;

    const std::vector<AttributeSpec>& schema() const noexcept { return schema_; }
    const ScalingParams& scaler() const noexcept { return scaler_; }
    const Detector& detector() const noexcept { return detector_; }

    friend bool operator==(const Pipeline&, const Pipeline&) = default;

private:
    std::vector<AttributeSpec> schema_;
    ScalingParams scaler_;
    Detector detector_;
};

/// Versioned text serialization. Doubles are written in hexadecimal
/// floating-point notation so that a round trip is bit-exact.
void write_pipeline(std::ostream& out, const Pipeline& p);
Pipeline read_pipeline(std::istream& in);
std::string serialize(const Pipeline& p);
Pipeline deserialize(const std::string& text);

}  // namespace dirad
