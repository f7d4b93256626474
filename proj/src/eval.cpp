#include "dirad/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace dirad {

double auroc(std::span<const double> scores, std::span<const Label> labels) {
    if (scores.size() != labels.size()) {
        throw DimensionError("auroc: " + std::to_string(scores.size()) + " scores for " +
                             std::to_string(labels.size()) + " labels");
    }
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (double s : scores) {
        if (std::isnan(s)) {
            throw ConfigError("auroc: NaN score");
        }
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of (mid)ranks of anomalies, 1-based. Ranks are multiples of 1/2 so
    // the sum is exact in double precision.
    double rank_sum = 0.0;
    std::size_t n_anomalous = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) {
            ++j;
        }
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) {
            if (labels[order[t]] == Label::anomalous) {
                rank_sum += mid;
                ++n_anomalous;
            }
        }
        i = j + 1;
    }
    const std::size_t n_normal = n - n_anomalous;
    if (n_anomalous == 0 || n_normal == 0) {
        throw ConfigError("auroc needs both normal and anomalous records");
    }
    const double na = static_cast<double>(n_anomalous);
    const double wins = rank_sum - na * (na + 1.0) / 2.0;
    return wins / (na * static_cast<double>(n_normal));
}

FoldPlan make_folds(std::size_t n_normal, std::size_t folds, std::uint64_t seed) {
    if (folds < 2 || n_normal < folds) {
        throw ConfigError("make_folds: need folds >= 2 and at least " + std::to_string(folds) +
                          " normal records, got " + std::to_string(n_normal));
    }
    std::vector<std::size_t> perm(n_normal);
    std::iota(perm.begin(), perm.end(), 0);
    // Fisher-Yates with rejection sampling, so the plan depends only on the
    // seed and not on the standard library's distribution implementations.
    std::mt19937_64 engine(seed);
    for (std::size_t i = n_normal; i > 1; --i) {
        const std::uint64_t bound = i;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r = 0;
        do {
            r = engine();
        } while (r >= limit);
        std::swap(perm[i - 1], perm[r % bound]);
    }

    FoldPlan plan;
    plan.seed = seed;
    const std::size_t base = n_normal / folds;
    const std::size_t extra = n_normal % folds;
    std::size_t offset = 0;
    for (std::size_t f = 0; f < folds; ++f) {
        const std::size_t size = base + (f < extra ? 1 : 0);
        Fold fold;
        fold.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(offset),
                         perm.begin() + static_cast<std::ptrdiff_t>(offset + size));
        fold.train.reserve(n_normal - size);
        fold.train.insert(fold.train.end(), perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(offset));
        fold.train.insert(fold.train.end(), perm.begin() + static_cast<std::ptrdiff_t>(offset + size), perm.end());
        std::sort(fold.test.begin(), fold.test.end());
        std::sort(fold.train.begin(), fold.train.end());
        plan.folds.push_back(std::move(fold));
        offset += size;
    }
    return plan;
}

FoldSplit split_fold(const Dataset& labelled, const FoldPlan& plan, std::size_t fold) {
    const auto normals = labelled.indices_with(Label::normal);
    const auto anomalies = labelled.indices_with(Label::anomalous);
    if (fold >= plan.folds.size()) {
        throw ConfigError("fold index out of range");
    }
    const Fold& f = plan.folds[fold];
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (auto pos : f.train) {
        if (pos >= normals.size()) {
            throw DimensionError("fold plan refers to more normal records than the dataset has");
        }
        train_rows.push_back(normals[pos]);
    }
    for (auto pos : f.test) {
        if (pos >= normals.size()) {
            throw DimensionError("fold plan refers to more normal records than the dataset has");
        }
        test_rows.push_back(normals[pos]);
    }
    test_rows.insert(test_rows.end(), anomalies.begin(), anomalies.end());
    const Dataset train = labelled.subset(train_rows);
    return {Dataset(train.schema(), train.records()), labelled.subset(test_rows)};
}

Pipeline fit_fold(const Dataset& labelled, const DetectorConfig& cfg, const FoldPlan& plan,
                  std::size_t fold, bool scale) {
    return Pipeline::fit(split_fold(labelled, plan, fold).train, cfg, scale);
}

ExperimentResult run_cv(const Dataset& labelled, const FoldScorer& scorer, const FoldPlan& plan) {
    if (labelled.indices_with(Label::anomalous).empty() ||
        labelled.indices_with(Label::normal).empty()) {
        throw ConfigError("cross-validation needs both normal and anomalous records");
    }
    ExperimentResult result;
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const auto split = split_fold(labelled, plan, f);
        const Dataset blind(split.test.schema(), split.test.records());
        std::vector<double> scores;
        try {
            scores = scorer(split.train, blind);
        } catch (const Error& e) {
            throw Error("fold " + std::to_string(f + 1) + ": " + e.what());
        }
        result.fold_auroc.push_back(auroc(scores, *split.test.labels()));
    }
    result.mean_auroc = std::accumulate(result.fold_auroc.begin(), result.fold_auroc.end(), 0.0) /
                        static_cast<double>(result.fold_auroc.size());
    return result;
}

ExperimentResult run_cv(const Dataset& labelled, const DetectorConfig& cfg, const FoldPlan& plan,
                        bool scale) {
    validate(cfg);
    auto result = run_cv(
        labelled,
        [&](const Dataset& train, const Dataset& test) {
            return Pipeline::fit(train, cfg, scale).score(test);
        },
        plan);
    result.detector = detector_name(cfg);
    result.variant = std::string(to_string(detector_variant(cfg)));
    return result;
}

double holdout_auroc(const Dataset& train, const Dataset& test, const DetectorConfig& cfg,
                     bool scale) {
    if (!test.labels()) {
        throw ConfigError("holdout test set must be labelled");
    }
    const Dataset plain_train(train.schema(), train.records());
    const Dataset plain_test(test.schema(), test.records());
    return auroc(Pipeline::fit(plain_train, cfg, scale).score(plain_test), *test.labels());
}

std::vector<AttributeDiagnostic> directionality_diagnostic(const Dataset& labelled, double tau) {
    const auto normals = labelled.indices_with(Label::normal);
    const auto anomalies = labelled.indices_with(Label::anomalous);
    if (normals.empty() || anomalies.empty()) {
        throw ConfigError("directionality diagnostic needs both normal and anomalous records");
    }
    const Dataset oriented = orient(labelled);
    const auto& x = oriented.records();
    auto mean_of = [&](const std::vector<std::size_t>& rows, std::size_t j) {
        double s = 0.0;
        for (auto i : rows) {
            s += x(i, j);
        }
        return s / static_cast<double>(rows.size());
    };
    std::vector<AttributeDiagnostic> out;
    for (std::size_t j = 0; j < labelled.attribute_count(); ++j) {
        AttributeDiagnostic d;
        d.name = labelled.schema()[j].name;
        d.direction = labelled.schema()[j].direction;
        d.normal_mean = mean_of(normals, j);
        d.anomalous_mean = mean_of(anomalies, j);
        d.difference = d.anomalous_mean - d.normal_mean;
        d.flagged = d.direction != Direction::none && d.anomalous_mean <= d.normal_mean + tau;
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace dirad
