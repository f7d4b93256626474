#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dirad/dataset.hpp"
#include "dirad/detector.hpp"

namespace dirad {

/// Probability that a random anomaly outscores a random normal record, ties
/// counting one half. Throws unless both classes are present.
double auroc(std::span<const double> scores, std::span<const Label> labels);

struct Fold {
    std::vector<std::size_t> train;  // positions among the normal records, ascending
    std::vector<std::size_t> test;   // ditto
};

struct FoldPlan {
    std::vector<Fold> folds;
    std::uint64_t seed = 0;
};

/// Seeded shuffle of 0..n_normal-1 cut into `folds` contiguous chunks; the
/// first n_normal % folds chunks get one extra record.
FoldPlan make_folds(std::size_t n_normal, std::size_t folds = 5, std::uint64_t seed = 0);

struct ExperimentResult {
    std::string dataset_id;
    std::string detector;
    std::string variant;
    std::vector<double> fold_auroc;
    double mean_auroc = 0.0;
};

/// Receives the raw fold-train normals (unlabelled) and the raw fold test set
/// (labels stripped); returns one score per test record.
using FoldScorer = std::function<std::vector<double>(const Dataset& train, const Dataset& test)>;

/// Training records and labelled test records of one fold.
struct FoldSplit {
    Dataset train;
    Dataset test;
};
FoldSplit split_fold(const Dataset& labelled, const FoldPlan& plan, std::size_t fold);

/// Fits orientation, scaler and detector on the fold's training normals only.
Pipeline fit_fold(const Dataset& labelled, const DetectorConfig& cfg, const FoldPlan& plan,
                  std::size_t fold, bool scale = true);

/// Cross-validation over the normal records: each fold tests one chunk of
/// normals plus every anomaly.
ExperimentResult run_cv(const Dataset& labelled, const FoldScorer& scorer, const FoldPlan& plan);
ExperimentResult run_cv(const Dataset& labelled, const DetectorConfig& cfg, const FoldPlan& plan,
                        bool scale = true);

/// Fit on `train`, score labelled `test`, return the AUROC.
double holdout_auroc(const Dataset& train, const Dataset& test, const DetectorConfig& cfg,
                     bool scale = true);

struct WilcoxonResult {
    double p_value = 1.0;
    double statistic = 0.0;  // sum of ranks of positive differences
    std::size_t n = 0;       // nonzero differences
    bool exact = false;
};

/// One-sided Wilcoxon signed-rank test of H1: median(x - y) > 0.
///
/// Zero differences are discarded and tied magnitudes get average ranks. The
/// exact null distribution is used when n <= 25 and the sample had neither
/// ties nor zeros; otherwise the normal approximation with tie and continuity
/// corrections. Requires at least 5 nonzero differences.
WilcoxonResult wilcoxon_one_sided(std::span<const double> x, std::span<const double> y);

/// Holm step-down adjusted p-values, in input order.
std::vector<double> holm_bonferroni(std::span<const double> pvals);

struct AttributeDiagnostic {
    std::string name;
    Direction direction = Direction::none;
    double normal_mean = 0.0;
    double anomalous_mean = 0.0;
    double difference = 0.0;  // anomalous - normal, after orientation
    bool flagged = false;
};

/// Class means per attribute (after orientation). Directional attributes
/// whose anomalous mean does not exceed the normal mean by more than `tau`
/// are flagged. The schema is never modified.
std::vector<AttributeDiagnostic> directionality_diagnostic(const Dataset& labelled,
                                                           double tau = 0.0);

}  // namespace dirad
