#include "dirad/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "dirad/csv.hpp"

namespace dirad {

std::string_view to_string(Direction d) noexcept {
    switch (d) {
        case Direction::high: return "high";
        case Direction::low: return "low";
        case Direction::none: return "none";
    }
    return "none";
}

Direction parse_direction(std::string_view text) {
    text = csv::trim(text);
    if (text == "high") return Direction::high;
    if (text == "low") return Direction::low;
    if (text == "none") return Direction::none;
    throw ParseError("unknown direction '" + std::string(text) + "' (expected high, low or none)");
}

void Schema::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& a : attributes) {
        if (a.name.empty()) {
            throw ConfigError("schema attribute with empty name");
        }
        if (!seen.insert(a.name).second) {
            throw ConfigError("duplicate attribute name '" + a.name + "' in schema");
        }
    }
    if (label && seen.contains(label->column)) {
        throw ConfigError("label column '" + label->column + "' is also listed as an attribute");
    }
}

Dataset::Dataset(std::vector<AttributeSpec> schema, Matrix records,
                 std::optional<std::vector<Label>> labels)
    : schema_(std::move(schema)), records_(std::move(records)), labels_(std::move(labels)) {
    if (records_.cols() != schema_.size() && !(records_.rows() == 0 && records_.cols() == 0)) {
        throw DimensionError("dataset has " + std::to_string(records_.cols()) +
                             " columns but schema lists " + std::to_string(schema_.size()));
    }
    if (records_.cols() != schema_.size()) {
        records_ = Matrix(0, schema_.size());
    }
    if (labels_ && labels_->size() != records_.rows()) {
        throw DimensionError("label count does not match record count");
    }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::optional<std::vector<Label>> labels;
    if (labels_) {
        labels.emplace();
        labels->reserve(indices.size());
        for (auto i : indices) {
            labels->push_back((*labels_)[i]);
        }
    }
    return Dataset(schema_, records_.select_rows(indices), std::move(labels));
}

std::vector<std::size_t> Dataset::indices_with(Label label) const {
    if (!labels_) {
        throw ConfigError("dataset has no labels");
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels_->size(); ++i) {
        if ((*labels_)[i] == label) {
            out.push_back(i);
        }
    }
    return out;
}

ScalingParams ScalingParams::identity(std::size_t m) {
    return {std::vector<double>(m, 0.0), std::vector<double>(m, 1.0)};
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw ConfigError("quantile of empty sample");
    }
    const double pos = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Dataset orient(const Dataset& ds) {
    auto schema = ds.schema();
    Matrix records = ds.records();
    for (std::size_t j = 0; j < schema.size(); ++j) {
        if (schema[j].direction != Direction::low) {
            continue;
        }
        schema[j].direction = Direction::high;
        for (std::size_t i = 0; i < records.rows(); ++i) {
            records(i, j) = -records(i, j);
        }
    }
    return Dataset(std::move(schema), std::move(records), ds.labels());
}

ScalingParams fit_scaler(const Dataset& train) {
    if (train.size() < 2) {
        throw ConfigError("fit_scaler needs at least 2 training records, got " +
                          std::to_string(train.size()));
    }
    const auto& x = train.records();
    ScalingParams p;
    p.midhinge.resize(x.cols());
    p.semi_iqr.resize(x.cols());
    std::vector<double> column(x.rows());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        for (std::size_t i = 0; i < x.rows(); ++i) {
            column[i] = x(i, j);
        }
        std::sort(column.begin(), column.end());
        const double q1 = quantile_sorted(column, 0.25);
        const double q3 = quantile_sorted(column, 0.75);
        p.midhinge[j] = (q1 + q3) / 2.0;
        double scale = (q3 - q1) / 2.0;
        if (!(scale > 0.0)) {
            scale = (column.back() - column.front()) / 2.0;
        }
        if (!(scale > 0.0)) {
            scale = 1.0;
        }
        p.semi_iqr[j] = scale;
    }
    return p;
}

Dataset apply_scaler(const Dataset& ds, const ScalingParams& params) {
    const std::size_t m = ds.attribute_count();
    if (params.midhinge.size() != m || params.semi_iqr.size() != m) {
        throw DimensionError("scaler fitted on " + std::to_string(params.midhinge.size()) +
                             " attributes applied to dataset with " + std::to_string(m));
    }
    Matrix out = ds.records();
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto r = out.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            r[j] = (r[j] - params.midhinge[j]) / params.semi_iqr[j];
        }
    }
    return Dataset(ds.schema(), std::move(out), ds.labels());
}

// --- CSV ------------------------------------------------------------------

namespace {

bool is_blank(const csv::Row& row) {
    return row.size() == 1 && csv::trim(row.front()).empty();
}

}  // namespace

Dataset parse_csv(std::istream& in, const Schema& schema) {
    schema.validate();
    auto header = csv::read_row(in);
    while (header && is_blank(*header)) {
        header = csv::read_row(in);
    }
    if (!header) {
        return Dataset(schema.attributes, Matrix(0, schema.size()));
    }

    std::unordered_map<std::string, std::size_t> attr_index;
    for (std::size_t j = 0; j < schema.size(); ++j) {
        attr_index.emplace(schema.attributes[j].name, j);
    }

    const std::size_t width = header->size();
    std::vector<std::size_t> column_to_attr(width, SIZE_MAX);
    std::vector<bool> attr_seen(schema.size(), false);
    std::optional<std::size_t> label_col;
    for (std::size_t c = 0; c < width; ++c) {
        const std::string name(csv::trim((*header)[c]));
        if (schema.label && name == schema.label->column) {
            label_col = c;
            continue;
        }
        const auto it = attr_index.find(name);
        if (it == attr_index.end()) {
            throw ParseError("CSV column '" + name + "' is not in the schema");
        }
        if (attr_seen[it->second]) {
            throw ParseError("CSV column '" + name + "' appears twice");
        }
        attr_seen[it->second] = true;
        column_to_attr[c] = it->second;
    }
    for (std::size_t j = 0; j < schema.size(); ++j) {
        if (!attr_seen[j]) {
            throw ParseError("schema attribute '" + schema.attributes[j].name +
                             "' missing from CSV header");
        }
    }

    std::vector<double> values;
    std::vector<Label> labels;
    std::size_t row_number = 0;
    while (auto row = csv::read_row(in)) {
        if (is_blank(*row)) {
            continue;
        }
        ++row_number;
        if (row->size() != width) {
            throw ParseError("row " + std::to_string(row_number) + ": expected " +
                             std::to_string(width) + " fields, got " +
                             std::to_string(row->size()));
        }
        const std::size_t base = values.size();
        values.resize(base + schema.size());
        for (std::size_t c = 0; c < width; ++c) {
            const std::string& cell = (*row)[c];
            if (label_col && c == *label_col) {
                const auto text = csv::trim(cell);
                const auto& spec = *schema.label;
                if (text == spec.anomalous_literal) {
                    labels.push_back(Label::anomalous);
                } else if (text.empty() || (spec.normal_literal && text != *spec.normal_literal)) {
                    throw ParseError("row " + std::to_string(row_number) + ": unknown label value '" +
                                     std::string(text) + "' in column '" + spec.column + "'");
                } else {
                    labels.push_back(Label::normal);
                }
                continue;
            }
            const auto v = csv::parse_double(cell);
            if (!v) {
                throw ParseError("row " + std::to_string(row_number) + ", column '" +
                                 schema.attributes[column_to_attr[c]].name +
                                 "': cannot parse '" + cell + "' as a number");
            }
            values[base + column_to_attr[c]] = *v;
        }
    }

    Matrix records(row_number, schema.size(), std::move(values));
    std::optional<std::vector<Label>> label_vec;
    if (label_col) {
        label_vec = std::move(labels);
    }
    return Dataset(schema.attributes, std::move(records), std::move(label_vec));
}

Dataset parse_csv_string(std::string_view text, const Schema& schema) {
    std::istringstream in{std::string(text)};
    return parse_csv(in, schema);
}

void write_csv(std::ostream& out, const Dataset& ds, const std::optional<LabelSpec>& label) {
    csv::Row row;
    for (const auto& a : ds.schema()) {
        row.push_back(a.name);
    }
    const bool with_labels = ds.labels().has_value();
    std::string anomalous = "anomalous";
    std::string normal = "normal";
    if (with_labels) {
        row.push_back(label ? label->column : "label");
        if (label) {
            anomalous = label->anomalous_literal;
            normal = label->normal_literal.value_or("normal");
        }
    }
    csv::write_row(out, row);
    const auto& x = ds.records();
    for (std::size_t i = 0; i < x.rows(); ++i) {
        row.clear();
        for (double v : x.row(i)) {
            row.push_back(csv::format_double(v));
        }
        if (with_labels) {
            row.push_back((*ds.labels())[i] == Label::anomalous ? anomalous : normal);
        }
        csv::write_row(out, row);
    }
}

// --- schema ---------------------------------------------------------------

Schema parse_schema(std::istream& in) {
    Schema schema;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto text = csv::trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        std::istringstream ls{std::string(text)};
        const auto fields = csv::read_row(ls).value_or(csv::Row{});
        std::vector<std::string> f;
        for (const auto& s : fields) {
            f.emplace_back(csv::trim(s));
        }
        if (f.size() >= 3 && f[0] == "label") {
            if (schema.label) {
                throw ParseError("schema line " + std::to_string(line_no) + ": second label line");
            }
            if (f.size() > 4) {
                throw ParseError("schema line " + std::to_string(line_no) + ": too many fields");
            }
            LabelSpec spec{f[1], f[2], std::nullopt};
            if (f.size() == 4) {
                spec.normal_literal = f[3];
            }
            schema.label = std::move(spec);
            continue;
        }
        if (f.size() != 2) {
            throw ParseError("schema line " + std::to_string(line_no) +
                             ": expected 'name,direction'");
        }
        try {
            schema.attributes.push_back({f[0], parse_direction(f[1])});
        } catch (const ParseError& e) {
            throw ParseError("schema line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    schema.validate();
    return schema;
}

Schema parse_schema_string(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_schema(in);
}

void write_schema(std::ostream& out, const Schema& schema) {
    for (const auto& a : schema.attributes) {
        csv::write_row(out, {a.name, std::string(to_string(a.direction))});
    }
    if (schema.label) {
        csv::Row row{"label", schema.label->column, schema.label->anomalous_literal};
        if (schema.label->normal_literal) {
            row.push_back(*schema.label->normal_literal);
        }
        csv::write_row(out, row);
    }
}

Schema read_schema_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open schema file '" + path + "'");
    }
    try {
        return parse_schema(in);
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Dataset read_csv_file(const std::string& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open CSV file '" + path + "'");
    }
    try {
        return parse_csv(in, schema);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace dirad
