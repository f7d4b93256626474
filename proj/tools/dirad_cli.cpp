// dirad: directional anomaly detection experiments from the command line.
//
//   dirad synth    --family gaussian --a 0.5 --seed 7 --out d/
//   dirad fit      --train t.csv --schema s.schema --detector nnd --variant ramp --model-out m.txt
//   dirad score    (--model m.txt | --train t.csv --schema s.schema ...) --query q.csv [--out scores.csv]
//   dirad bench cv      --data a.csv [--data b.csv] [--cells nnd:ramp,...] --out results.csv
//   dirad bench holdout --train d/train.csv --test d/test.csv --schema d/schema.txt
//   dirad bench sweep   --family gaussian --replicates 10 --k 1,8,100 --out sweep.csv
//   dirad stats    --results results.csv [--compare nnd:ramp>nnd:absolute] [--holm]
//   dirad diagnose --data a.csv --schema a.schema [--tau 0]
//
// DIRAD_THREADS overrides the OpenMP thread count.

#include <omp.h>

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using namespace dirad;
using namespace dirad::cli;

void add_detector_options(CLI::App* app, DetectorOptions& o) {
    app->add_option("--k", o.nnd_k, "NND neighbour count")->capture_default_str();
    app->add_option("--alp-k", o.alp_k, "ALP k (default: round(5.5 ln n))");
    app->add_option("--alp-l", o.alp_l, "ALP l (default: round(6 ln n))");
    app->add_option("--p", o.exponent_p, "Minkowski exponent (signed requires 1)")->capture_default_str();
}

std::vector<Cell> resolve_cells(const std::vector<std::string>& cells, const std::vector<std::string>& detectors,
                                const std::vector<std::string>& variants) {
    if (!cells.empty()) {
        std::vector<Cell> out;
        for (const auto& c : cells) {
            out.push_back(parse_cell(c));
        }
        return out;
    }
    if (detectors.empty() && variants.empty()) {
        return default_cells();
    }
    return cross_cells(detectors.empty() ? std::vector<std::string>{"nnd", "alp"} : detectors,
                       variants.empty() ? std::vector<std::string>{"absolute", "ramp"} : variants);
}

void apply_thread_override() {
    if (const char* env = std::getenv("DIRAD_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            omp_set_num_threads(n);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_override();

    CLI::App app{"Directional semi-supervised anomaly detection (NND, ALP)"};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.require_subcommand(1);
    int rc = 0;

    // synth
    SynthOptions synth;
    std::string family = "gaussian";
    std::optional<double> shift_a, shift_b;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic train/test pair");
    synth_cmd->add_option("--family", family, "gaussian or bernoulli")->capture_default_str();
    synth_cmd->add_option("--a", shift_a, "Gaussian mean shift of anomalies, in [0, 1]");
    synth_cmd->add_option("--b", shift_b, "Bernoulli probability shift, in [0, 0.5]");
    synth_cmd->add_option("--n-train", synth.spec.n_train)->capture_default_str();
    synth_cmd->add_option("--n-test-normal", synth.spec.n_test_normal)->capture_default_str();
    synth_cmd->add_option("--n-test-anomalous", synth.spec.n_test_anomalous)->capture_default_str();
    synth_cmd->add_option("--m", synth.spec.m, "attribute count")->capture_default_str();
    synth_cmd->add_option("--seed", synth.spec.seed)->capture_default_str();
    synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();

    // fit
    FitOptions fit;
    std::string model_out;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a model on normal training records and save it");
    auto add_fit_options = [](CLI::App* cmd, FitOptions& f, bool required) {
        auto* train = cmd->add_option("--train", f.train_csv, "training CSV (anomalies are dropped)");
        auto* schema = cmd->add_option("--schema", f.schema_path, "schema file");
        if (required) {
            train->required();
            schema->required();
        }
        cmd->add_option("--detector", f.detector, "nnd or alp")->capture_default_str();
        cmd->add_option("--variant", f.variant, "absolute, ramp or signed")->capture_default_str();
        cmd->add_flag("!--no-scale", f.scale, "skip midhinge / semi-IQR scaling");
        add_detector_options(cmd, f.detector_opts);
    };
    add_fit_options(fit_cmd, fit, true);
    fit_cmd->add_option("--model-out", model_out, "model file to write")->required();

    // score
    ScoreOptions score;
    FitOptions score_fit;
    std::string score_model;
    auto* score_cmd = app.add_subcommand("score", "Score query records, one anomaly score in [0,1] per row");
    score_cmd->add_option("--model", score_model, "saved model file");
    add_fit_options(score_cmd, score_fit, false);
    score_cmd->add_option("--query", score.query_csv, "query CSV")->required();
    score_cmd->add_option("--out", score.out_path, "output CSV (default stdout)");
    score_cmd->add_option("--save-model", score.save_model, "also save the fitted model");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run experiments");
    bench_cmd->require_subcommand(1);
    std::vector<std::string> cells, detectors, variants;
    auto add_cell_options = [&](CLI::App* cmd) {
        cmd->add_option("--cells", cells, "detector:variant list")->delimiter(',');
        cmd->add_option("--detectors", detectors, "detectors for a cross product")->delimiter(',');
        cmd->add_option("--variants", variants, "variants for a cross product")->delimiter(',');
    };

    CvOptions cv;
    std::vector<std::string> cv_data, cv_schemas;
    auto* cv_cmd = bench_cmd->add_subcommand("cv", "5-fold cross-validation on labelled datasets");
    cv_cmd->add_option("--data", cv_data, "labelled dataset CSV (repeatable)")->required();
    cv_cmd->add_option("--schema", cv_schemas, "schema per dataset (default: <csv stem>.schema)");
    add_cell_options(cv_cmd);
    add_detector_options(cv_cmd, cv.detector_opts);
    cv_cmd->add_option("--folds", cv.folds)->capture_default_str();
    cv_cmd->add_option("--seed", cv.seed)->capture_default_str();
    cv_cmd->add_flag("!--no-scale", cv.scale, "skip scaling");
    cv_cmd->add_option("--out", cv.out_path, "results CSV (default stdout)");

    HoldoutOptions holdout;
    auto* holdout_cmd = bench_cmd->add_subcommand("holdout", "Fit on a training file, evaluate on a labelled test file");
    holdout_cmd->add_option("--train", holdout.train_csv)->required();
    holdout_cmd->add_option("--test", holdout.test_csv)->required();
    holdout_cmd->add_option("--schema", holdout.schema_path)->required();
    holdout_cmd->add_option("--id", holdout.dataset_id, "dataset id in the results")->capture_default_str();
    add_cell_options(holdout_cmd);
    add_detector_options(holdout_cmd, holdout.detector_opts);
    holdout_cmd->add_flag("!--no-scale", holdout.scale, "skip scaling");
    holdout_cmd->add_option("--out", holdout.out_path, "results CSV (default stdout)");

    SweepOptions sweep;
    std::string sweep_family = "gaussian";
    auto* sweep_cmd = bench_cmd->add_subcommand("sweep", "Synthetic shift sweep, mean AUROC over replicates");
    sweep_cmd->add_option("--family", sweep_family)->capture_default_str();
    sweep_cmd->add_option("--shifts", sweep.shifts, "shift values (default: full grid)")->delimiter(',');
    sweep_cmd->add_option("--replicates", sweep.replicates)->capture_default_str();
    sweep_cmd->add_option("--ks", sweep.nnd_ks, "NND k values")->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--n-train", sweep.base.n_train)->capture_default_str();
    sweep_cmd->add_option("--n-test-normal", sweep.base.n_test_normal)->capture_default_str();
    sweep_cmd->add_option("--n-test-anomalous", sweep.base.n_test_anomalous)->capture_default_str();
    sweep_cmd->add_option("--m", sweep.base.m)->capture_default_str();
    sweep_cmd->add_option("--seed", sweep.seed)->capture_default_str();
    add_cell_options(sweep_cmd);
    sweep_cmd->add_option("--alp-k", sweep.detector_opts.alp_k);
    sweep_cmd->add_option("--alp-l", sweep.detector_opts.alp_l);
    sweep_cmd->add_flag("!--no-scale", sweep.scale, "skip scaling");
    sweep_cmd->add_option("--out", sweep.out_path, "sweep CSV (default stdout)");

    // stats
    StatsOptions stats;
    auto* stats_cmd = app.add_subcommand("stats", "One-sided Wilcoxon signed-rank tests between result columns");
    stats_cmd->add_option("--results", stats.results, "results CSV (repeatable)")->required();
    stats_cmd->add_option("--compare", stats.comparisons, "a>b, e.g. nnd:ramp>nnd:absolute (repeatable)");
    stats_cmd->add_flag("--holm", stats.holm, "Holm-Bonferroni adjustment across the comparisons");

    // diagnose
    DiagnoseOptions diag;
    auto* diag_cmd = app.add_subcommand("diagnose", "Compare class means per attribute");
    diag_cmd->add_option("--data", diag.csv)->required();
    diag_cmd->add_option("--schema", diag.schema_path)->required();
    diag_cmd->add_option("--tau", diag.tau, "flag when anomalous mean <= normal mean + tau")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth_cmd) {
            synth.spec.family = parse_family(family);
            if (shift_a && shift_b) {
                throw CLI::ValidationError("--a/--b", "give only one shift");
            }
            if (synth.spec.family == SynthFamily::gaussian && shift_b) {
                throw CLI::ValidationError("--b", "--b applies to the bernoulli family");
            }
            if (synth.spec.family == SynthFamily::bernoulli && shift_a) {
                throw CLI::ValidationError("--a", "--a applies to the gaussian family");
            }
            synth.spec.shift = shift_a.value_or(shift_b.value_or(0.0));
            try {
                synth.spec.validate();
            } catch (const ConfigError& e) {
                throw CLI::ValidationError("shift", e.what());
            }
            rc = cmd_synth(synth, std::cerr);
        } else if (*fit_cmd) {
            rc = cmd_fit(fit, model_out, std::cerr);
        } else if (*score_cmd) {
            if (!score_model.empty()) {
                score.model_path = score_model;
                if (!score_fit.schema_path.empty()) {
                    score.schema_path = score_fit.schema_path;
                }
            } else if (!score_fit.train_csv.empty() && !score_fit.schema_path.empty()) {
                score.fit = score_fit;
            } else {
                throw CLI::ValidationError("score", "give --model, or --train with --schema");
            }
            rc = cmd_score(score, std::cout, std::cerr);
        } else if (*cv_cmd) {
            if (!cv_schemas.empty() && cv_schemas.size() != cv_data.size()) {
                throw CLI::ValidationError("--schema", "give one schema per --data or none");
            }
            for (std::size_t i = 0; i < cv_data.size(); ++i) {
                cv.datasets.push_back(dataset_ref(
                    cv_data[i], cv_schemas.empty() ? std::nullopt : std::optional<std::string>(cv_schemas[i])));
            }
            cv.cells = resolve_cells(cells, detectors, variants);
            rc = cmd_bench_cv(cv, std::cout, std::cerr);
        } else if (*holdout_cmd) {
            holdout.cells = resolve_cells(cells, detectors, variants);
            rc = cmd_bench_holdout(holdout, std::cout, std::cerr);
        } else if (*sweep_cmd) {
            sweep.base.family = parse_family(sweep_family);
            sweep.cells = cells.empty() && detectors.empty() && variants.empty()
                              ? cross_cells({"nnd"}, {"absolute", "ramp", "signed"})
                              : resolve_cells(cells, detectors, variants);
            rc = cmd_bench_sweep(sweep, std::cout, std::cerr);
        } else if (*stats_cmd) {
            rc = cmd_stats(stats, std::cout, std::cerr);
        } else if (*diag_cmd) {
            rc = cmd_diagnose(diag, std::cout, std::cerr);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
