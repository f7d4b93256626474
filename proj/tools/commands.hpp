#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dirad/detector.hpp"
#include "dirad/synthgen.hpp"

namespace dirad::cli {

/// Writes `content` to `path` via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

/// "nnd:ramp" style cell, parsed and validated.
struct Cell {
    std::string detector;
    DistanceVariant variant = DistanceVariant::absolute;

    std::string name() const;
};
Cell parse_cell(const std::string& text);
/// Cross product of detectors and variants. Requesting signed together with
/// alp is a configuration error.
std::vector<Cell> cross_cells(const std::vector<std::string>& detectors,
                              const std::vector<std::string>& variants);
/// nnd:{absolute,ramp,signed} and alp:{absolute,ramp}.
std::vector<Cell> default_cells();

struct DetectorOptions {
    std::size_t nnd_k = 8;
    std::optional<std::size_t> alp_k;
    std::optional<std::size_t> alp_l;
    double exponent_p = 1.0;
};
DetectorConfig make_config(const Cell& cell, const DetectorOptions& opts);

struct SynthOptions {
    SynthSpec spec;
    std::string out_dir;
};
int cmd_synth(const SynthOptions& opts, std::ostream& log);

struct FitOptions {
    std::string train_csv;
    std::string schema_path;
    std::string detector = "nnd";
    std::string variant = "absolute";
    DetectorOptions detector_opts;
    bool scale = true;
};
Pipeline fit_from_files(const FitOptions& opts);

struct ScoreOptions {
    std::optional<std::string> model_path;
    std::optional<FitOptions> fit;
    std::optional<std::string> schema_path;  // query schema when scoring a saved model
    std::string query_csv;
    std::optional<std::string> out_path;
    std::optional<std::string> save_model;
};
int cmd_fit(const FitOptions& opts, const std::string& model_out, std::ostream& log);
int cmd_score(const ScoreOptions& opts, std::ostream& out, std::ostream& log);

struct DatasetRef {
    std::string id;
    std::string csv;
    std::string schema;
};
/// `path.csv` with sidecar `path.schema` unless `schema` is given.
DatasetRef dataset_ref(const std::string& csv, const std::optional<std::string>& schema);

struct CvOptions {
    std::vector<DatasetRef> datasets;
    std::vector<Cell> cells;
    DetectorOptions detector_opts;
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    bool scale = true;
    std::optional<std::string> out_path;
};
int cmd_bench_cv(const CvOptions& opts, std::ostream& out, std::ostream& log);

struct HoldoutOptions {
    std::string train_csv;
    std::string test_csv;
    std::string schema_path;
    std::string dataset_id = "holdout";
    std::vector<Cell> cells;
    DetectorOptions detector_opts;
    bool scale = true;
    std::optional<std::string> out_path;
};
int cmd_bench_holdout(const HoldoutOptions& opts, std::ostream& out, std::ostream& log);

struct SweepOptions {
    SynthSpec base;  // family and counts; shift and seed are set per grid point
    std::vector<double> shifts;
    std::size_t replicates = 100;
    std::uint64_t seed = 0;
    std::vector<Cell> cells;
    std::vector<std::size_t> nnd_ks{1, 8, 100};
    DetectorOptions detector_opts;
    bool scale = true;
    std::optional<std::string> out_path;
};
int cmd_bench_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& log);

struct StatsOptions {
    std::vector<std::string> results;
    /// "nnd:ramp>nnd:absolute"; empty means ramp versus the other variants
    /// of each detector present.
    std::vector<std::string> comparisons;
    bool holm = false;
};
int cmd_stats(const StatsOptions& opts, std::ostream& out, std::ostream& log);

struct DiagnoseOptions {
    std::string csv;
    std::string schema_path;
    double tau = 0.0;
};
int cmd_diagnose(const DiagnoseOptions& opts, std::ostream& out, std::ostream& log);

}  // namespace dirad::cli
