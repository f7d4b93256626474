#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dirad/matrix.hpp"

namespace dirad {

/// Which tail of an attribute indicates anomality.
enum class Direction : std::uint8_t { high, low, none };

enum class Label : std::uint8_t { normal, anomalous };

std::string_view to_string(Direction d) noexcept;
Direction parse_direction(std::string_view text);

struct AttributeSpec {
    std::string name;
    Direction direction = Direction::none;

    friend bool operator==(const AttributeSpec&, const AttributeSpec&) = default;
};

/// How the label column of a CSV maps onto {normal, anomalous}.
///
/// Cells equal to `anomalous_literal` are anomalous. When `normal_literal` is
/// set, cells must equal one of the two literals; otherwise every other
/// non-empty value is normal.
struct LabelSpec {
    std::string column;
    std::string anomalous_literal;
    std::optional<std::string> normal_literal;

    friend bool operator==(const LabelSpec&, const LabelSpec&) = default;
};

/// Attribute list plus optional label mapping, as stored in a schema file.
struct Schema {
    std::vector<AttributeSpec> attributes;
    std::optional<LabelSpec> label;

    std::size_t size() const noexcept { return attributes.size(); }
    /// Throws ConfigError on duplicate or empty attribute names.
    void validate() const;

    friend bool operator==(const Schema&, const Schema&) = default;
};

/// Numeric records with per-attribute directionality and optional labels.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<AttributeSpec> schema, Matrix records,
            std::optional<std::vector<Label>> labels = std::nullopt);

    const std::vector<AttributeSpec>& schema() const noexcept { return schema_; }
    const Matrix& records() const noexcept { return records_; }
    const std::optional<std::vector<Label>>& labels() const noexcept { return labels_; }

    std::size_t size() const noexcept { return records_.rows(); }
    std::size_t attribute_count() const noexcept { return schema_.size(); }

    /// Records and labels restricted to `indices`, in that order.
    Dataset subset(std::span<const std::size_t> indices) const;
    /// Indices of records with the given label. Throws if unlabelled.
    std::vector<std::size_t> indices_with(Label label) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::vector<AttributeSpec> schema_;
    Matrix records_;
    std::optional<std::vector<Label>> labels_;
};

/// Robust per-attribute location and scale, fitted on normal training data.
struct ScalingParams {
    std::vector<double> midhinge;
    std::vector<double> semi_iqr;

    /// Identity transform over `m` attributes (midhinge 0, semi-IQR 1).
    static ScalingParams identity(std::size_t m);

    friend bool operator==(const ScalingParams&, const ScalingParams&) = default;
};

/// Linear-interpolation quantile between order statistics at (n-1)*q.
/// `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double q);

/// Negates every low-direction attribute and relabels it high.
Dataset orient(const Dataset& ds);

/// Midhinge and semi-interquartile range per attribute.
///
/// A zero semi-IQR falls back to half the attribute's range, and to 1 when
/// the attribute is constant. Requires at least two records.
ScalingParams fit_scaler(const Dataset& train);

/// Maps value v of attribute j to (v - midhinge[j]) / semi_iqr[j].
Dataset apply_scaler(const Dataset& ds, const ScalingParams& params);

// --- text formats ---------------------------------------------------------

/// Parses CSV text (header row required) into a dataset with the schema's
/// attributes in schema order. The label column, when the schema names one
/// and it appears in the header, is mapped through the LabelSpec. Columns not
/// mentioned by the schema are an error.
Dataset parse_csv(std::istream& in, const Schema& schema);
Dataset parse_csv_string(std::string_view text, const Schema& schema);

/// Writes the dataset as CSV. Values use the shortest round-trip decimal
/// form; labels (if any) go to `label.column` using its literals, or to a
/// column named "label" with literals "anomalous"/"normal".
void write_csv(std::ostream& out, const Dataset& ds, const std::optional<LabelSpec>& label = {});

/// Schema file: one `name,direction` line per attribute and an optional
/// `label,<column>,<anomalous>[,<normal>]` line. Blank lines and lines
/// starting with '#' are skipped.
Schema parse_schema(std::istream& in);
Schema parse_schema_string(std::string_view text);
void write_schema(std::ostream& out, const Schema& schema);

Schema read_schema_file(const std::string& path);
Dataset read_csv_file(const std::string& path, const Schema& schema);

}  // namespace dirad
