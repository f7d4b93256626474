#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <cmath>
#include <limits>

#include "dirad/csv.hpp"
#include "dirad/eval.hpp"

namespace dirad::cli {

namespace fs = std::filesystem;

void write_file_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write '" + tmp.string() + "'");
        }
        out << content;
        out.flush();
        if (!out) {
            throw Error("write failed for '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());
    }
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::optional<std::string>& path, const std::string& content, std::ostream& out) {
    if (path) {
        write_file_atomic(*path, content);
    } else {
        out << content;
    }
}

std::string fixed3(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(3) << v;
    return ss.str();
}

std::string pformat(double p) {
    std::ostringstream ss;
    ss << std::setprecision(4) << p;
    return ss.str();
}

void validate_detector_name(const std::string& d) {
    if (d != "nnd" && d != "alp") {
        throw ConfigError("unknown detector '" + d + "' (expected nnd or alp)");
    }
}

}  // namespace

std::string Cell::name() const { return detector + ":" + std::string(to_string(variant)); }

Cell parse_cell(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("cell '" + text + "' must look like detector:variant");
    }
    Cell c{text.substr(0, colon), parse_variant(text.substr(colon + 1))};
    validate_detector_name(c.detector);
    if (c.detector == "alp" && c.variant == DistanceVariant::signed_) {
        throw ConfigError("alp:signed is not a supported combination");
    }
    return c;
}

std::vector<Cell> cross_cells(const std::vector<std::string>& detectors,
                              const std::vector<std::string>& variants) {
    std::vector<Cell> out;
    for (const auto& d : detectors) {
        for (const auto& v : variants) {
            out.push_back(parse_cell(d + ":" + v));
        }
    }
    return out;
}

std::vector<Cell> default_cells() {
    return {
        {"nnd", DistanceVariant::absolute}, {"nnd", DistanceVariant::ramp},
        {"nnd", DistanceVariant::signed_},  {"alp", DistanceVariant::absolute},
        {"alp", DistanceVariant::ramp},
    };
}

DetectorConfig make_config(const Cell& cell, const DetectorOptions& opts) {
    DetectorConfig cfg;
    if (cell.detector == "nnd") {
        cfg = NndConfig{opts.nnd_k, cell.variant, opts.exponent_p};
    } else {
        cfg = AlpConfig{opts.alp_k, opts.alp_l, cell.variant, opts.exponent_p};
    }
    validate(cfg);
    return cfg;
}

// --- synth ----------------------------------------------------------------

int cmd_synth(const SynthOptions& opts, std::ostream& log) {
    const auto data = generate(opts.spec);
    const Schema schema = synth_schema(opts.spec.m);
    const fs::path dir(opts.out_dir);

    std::ostringstream train, test, schema_text;
    write_csv(train, data.train, schema.label);
    write_csv(test, data.test, schema.label);
    write_schema(schema_text, schema);
    write_file_atomic((dir / "train.csv").string(), train.str());
    write_file_atomic((dir / "test.csv").string(), test.str());
    write_file_atomic((dir / "schema.txt").string(), schema_text.str());
    log << "wrote train.csv, test.csv, schema.txt to " << dir.string() << '\n';
    return 0;
}

// --- fit / score ------------------------------------------------------------

Pipeline fit_from_files(const FitOptions& opts) {
    const Schema schema = read_schema_file(opts.schema_path);
    const Dataset raw = read_csv_file(opts.train_csv, schema);
    Dataset train = raw;
    if (raw.labels()) {
        train = raw.subset(raw.indices_with(Label::normal));
    }
    validate_detector_name(opts.detector);
    const Cell cell{opts.detector, parse_variant(opts.variant)};
    return Pipeline::fit(Dataset(train.schema(), train.records()), make_config(cell, opts.detector_opts),
                         opts.scale);
}

int cmd_fit(const FitOptions& opts, const std::string& model_out, std::ostream& log) {
    const Pipeline p = fit_from_files(opts);
    write_file_atomic(model_out, serialize(p));
    log << "model written to " << model_out << '\n';
    return 0;
}

int cmd_score(const ScoreOptions& opts, std::ostream& out, std::ostream& log) {
    std::optional<Pipeline> pipeline;
    Schema schema;
    if (opts.model_path) {
        pipeline = deserialize(read_file(*opts.model_path));
        schema.attributes = pipeline->schema();
        if (opts.schema_path) {
            schema = read_schema_file(*opts.schema_path);
        }
    } else if (opts.fit) {
        pipeline = fit_from_files(*opts.fit);
        schema = read_schema_file(opts.fit->schema_path);
    } else {
        throw ConfigError("score needs --model or training data");
    }
    if (schema.attributes != pipeline->schema()) {
        throw DimensionError("query schema does not match the model's attributes");
    }
    if (opts.save_model) {
        write_file_atomic(*opts.save_model, serialize(*pipeline));
    }
    const Dataset queries = read_csv_file(opts.query_csv, schema);
    const Dataset plain(queries.schema(), queries.records());
    const auto scores = pipeline->score(plain);

    std::ostringstream text;
    text << "score\n";
    for (double s : scores) {
        text << csv::format_double(s) << '\n';
    }
    emit(opts.out_path, text.str(), out);
    log << "scored " << scores.size() << " records\n";
    return 0;
}

// --- bench ----------------------------------------------------------------

DatasetRef dataset_ref(const std::string& csv, const std::optional<std::string>& schema) {
    const fs::path p(csv);
    DatasetRef ref;
    ref.id = p.stem().string();
    ref.csv = csv;
    ref.schema = schema ? *schema : fs::path(p).replace_extension(".schema").string();
    return ref;
}

namespace {

constexpr std::string_view kResultsHeader = "dataset,detector,variant,fold,auroc\n";

void append_result_rows(std::ostringstream& csv_out, const std::string& dataset, const Cell& cell,
                        const std::vector<std::pair<std::string, double>>& rows) {
    for (const auto& [fold, value] : rows) {
        csv::write_row(csv_out, {dataset, cell.detector, std::string(to_string(cell.variant)), fold,
                                 csv::format_double(value)});
    }
}

// Table with one row per dataset, one column per cell, and a `best` column
// naming the highest-scoring variant of each detector.
void print_summary(std::ostream& out, const std::vector<std::string>& datasets,
                   const std::vector<Cell>& cells,
                   const std::map<std::pair<std::string, std::string>, double>& means) {
    std::size_t width = 8;
    for (const auto& d : datasets) {
        width = std::max(width, d.size() + 2);
    }
    out << std::left << std::setw(static_cast<int>(width)) << "dataset";
    for (const auto& c : cells) {
        out << std::setw(14) << c.name();
    }
    out << "best\n";
    for (const auto& d : datasets) {
        out << std::setw(static_cast<int>(width)) << d;
        std::map<std::string, std::pair<double, std::string>> best;
        for (const auto& c : cells) {
            const auto it = means.find({d, c.name()});
            if (it == means.end()) {
                out << std::setw(14) << "failed";
                continue;
            }
            out << std::setw(14) << fixed3(it->second);
            auto& b = best[c.detector];
            if (b.second.empty() || it->second > b.first) {
                b = {it->second, c.name()};
            }
        }
        std::string marker;
        for (const auto& [det, b] : best) {
            marker += (marker.empty() ? "" : " ") + b.second;
        }
        out << marker << '\n';
    }
}

}  // namespace

int cmd_bench_cv(const CvOptions& opts, std::ostream& out, std::ostream& log) {
    std::ostringstream results;
    results << kResultsHeader;
    std::map<std::pair<std::string, std::string>, double> means;
    std::vector<std::string> ids;
    bool failed = false;
    for (const auto& ref : opts.datasets) {
        ids.push_back(ref.id);
        Dataset ds;
        FoldPlan plan;
        try {
            ds = read_csv_file(ref.csv, read_schema_file(ref.schema));
            if (!ds.labels()) {
                throw ConfigError("dataset has no label column");
            }
            plan = make_folds(ds.indices_with(Label::normal).size(), opts.folds, opts.seed);
        } catch (const Error& e) {
            log << ref.id << ": " << e.what() << '\n';
            failed = true;
            continue;
        }
        for (const auto& cell : opts.cells) {
            try {
                auto r = run_cv(ds, make_config(cell, opts.detector_opts), plan, opts.scale);
                std::vector<std::pair<std::string, double>> rows;
                for (std::size_t f = 0; f < r.fold_auroc.size(); ++f) {
                    rows.emplace_back(std::to_string(f + 1), r.fold_auroc[f]);
                }
                rows.emplace_back("mean", r.mean_auroc);
                append_result_rows(results, ref.id, cell, rows);
                means[{ref.id, cell.name()}] = r.mean_auroc;
            } catch (const Error& e) {
                log << ref.id << " " << cell.name() << ": " << e.what() << '\n';
                failed = true;
            }
        }
    }
    if (opts.out_path) {
        write_file_atomic(*opts.out_path, results.str());
        print_summary(out, ids, opts.cells, means);
    } else {
        out << results.str();
        print_summary(log, ids, opts.cells, means);
    }
    return failed ? 1 : 0;
}

int cmd_bench_holdout(const HoldoutOptions& opts, std::ostream& out, std::ostream& log) {
    const Schema schema = read_schema_file(opts.schema_path);
    const Dataset train = read_csv_file(opts.train_csv, schema);
    const Dataset test = read_csv_file(opts.test_csv, schema);
    std::ostringstream results;
    results << kResultsHeader;
    std::map<std::pair<std::string, std::string>, double> means;
    bool failed = false;
    for (const auto& cell : opts.cells) {
        try {
            const double a = holdout_auroc(train, test, make_config(cell, opts.detector_opts), opts.scale);
            append_result_rows(results, opts.dataset_id, cell, {{"holdout", a}});
            means[{opts.dataset_id, cell.name()}] = a;
        } catch (const Error& e) {
            log << cell.name() << ": " << e.what() << '\n';
            failed = true;
        }
    }
    if (opts.out_path) {
        write_file_atomic(*opts.out_path, results.str());
        print_summary(out, {opts.dataset_id}, opts.cells, means);
    } else {
        out << results.str();
        print_summary(log, {opts.dataset_id}, opts.cells, means);
    }
    return failed ? 1 : 0;
}

int cmd_bench_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& log) {
    struct SweepCell {
        Cell cell;
        std::string k_label;
        DetectorConfig cfg;
    };
    std::vector<SweepCell> sweep_cells;
    for (const auto& cell : opts.cells) {
        if (cell.detector == "nnd") {
            for (auto k : opts.nnd_ks) {
                DetectorOptions o = opts.detector_opts;
                o.nnd_k = k;
                sweep_cells.push_back({cell, std::to_string(k), make_config(cell, o)});
            }
        } else {
            const auto& o = opts.detector_opts;
            std::string label = o.alp_k ? std::to_string(*o.alp_k) : "auto";
            sweep_cells.push_back({cell, label, make_config(cell, o)});
        }
    }
    const auto shifts = opts.shifts.empty() ? default_shifts(opts.base.family) : opts.shifts;
    const auto specs = grid(opts.base.family, shifts, opts.replicates, opts.seed, opts.base);
    for (const auto& s : specs) {
        s.validate();
    }

    // auc[spec][cell]; NaN marks a failed cell.
    std::vector<std::vector<double>> auc(specs.size(), std::vector<double>(sweep_cells.size()));
    std::vector<std::string> errors(specs.size());
    const auto count = static_cast<std::ptrdiff_t>(specs.size());

    #pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            const auto data = generate(specs[idx]);
            for (std::size_t c = 0; c < sweep_cells.size(); ++c) {
                auc[idx][c] = holdout_auroc(data.train, data.test, sweep_cells[c].cfg, opts.scale);
            }
        } catch (const std::exception& e) {
            errors[idx] = e.what();
            std::fill(auc[idx].begin(), auc[idx].end(), std::numeric_limits<double>::quiet_NaN());
        }
    }

    bool failed = false;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (!errors[i].empty()) {
            log << "shift " << specs[i].shift << " seed " << specs[i].seed << ": " << errors[i] << '\n';
            failed = true;
        }
    }

    std::ostringstream results;
    results << "family,shift,detector,k,variant,replicates,mean_auroc\n";
    std::ostringstream summary;
    summary << std::left << std::setw(8) << "shift";
    for (const auto& sc : sweep_cells) {
        summary << std::setw(18) << (sc.cell.name() + "@k=" + sc.k_label);
    }
    summary << '\n';
    for (std::size_t s = 0; s < shifts.size(); ++s) {
        summary << std::setw(8) << csv::format_double(shifts[s]);
        for (std::size_t c = 0; c < sweep_cells.size(); ++c) {
            double sum = 0.0;
            std::size_t used = 0;
            for (std::size_t r = 0; r < opts.replicates; ++r) {
                const double v = auc[s * opts.replicates + r][c];
                if (!std::isnan(v)) {
                    sum += v;
                    ++used;
                }
            }
            const double mean = used ? sum / static_cast<double>(used) : std::numeric_limits<double>::quiet_NaN();
            const auto& sc = sweep_cells[c];
            csv::write_row(results, {std::string(to_string(opts.base.family)), csv::format_double(shifts[s]),
                                     sc.cell.detector, sc.k_label, std::string(to_string(sc.cell.variant)),
                                     std::to_string(used), used ? csv::format_double(mean) : "nan"});
            summary << std::setw(18) << (used ? fixed3(mean) : "failed");
        }
        summary << '\n';
    }
    if (opts.out_path) {
        write_file_atomic(*opts.out_path, results.str());
        out << summary.str();
    } else {
        out << results.str();
        log << summary.str();
    }
    return failed ? 1 : 0;
}

// --- stats ----------------------------------------------------------------

namespace {

// dataset -> (column -> mean AUROC), from the `mean` (or `holdout`) rows.
std::map<std::string, std::map<std::string, double>> load_means(const std::vector<std::string>& paths) {
    std::map<std::string, std::map<std::string, double>> table;
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw Error("cannot open results file '" + path + "'");
        }
        const auto header = csv::read_row(in);
        const csv::Row expected{"dataset", "detector", "variant", "fold", "auroc"};
        if (!header || *header != expected) {
            throw ParseError(path + ": expected header dataset,detector,variant,fold,auroc");
        }
        std::size_t line = 1;
        while (auto row = csv::read_row(in)) {
            ++line;
            if (row->size() == 1 && row->front().empty()) {
                continue;
            }
            if (row->size() != 5) {
                throw ParseError(path + " line " + std::to_string(line) + ": expected 5 fields");
            }
            if ((*row)[3] != "mean" && (*row)[3] != "holdout") {
                continue;
            }
            const auto v = csv::parse_double((*row)[4]);
            if (!v) {
                throw ParseError(path + " line " + std::to_string(line) + ": bad AUROC value");
            }
            table[(*row)[0]][(*row)[1] + ":" + (*row)[2]] = *v;
        }
    }
    return table;
}

}  // namespace

int cmd_stats(const StatsOptions& opts, std::ostream& out, std::ostream& log) {
    const auto table = load_means(opts.results);
    std::set<std::string> columns;
    for (const auto& [ds, cols] : table) {
        for (const auto& [c, v] : cols) {
            columns.insert(c);
        }
    }

    std::vector<std::pair<std::string, std::string>> pairs;
    if (opts.comparisons.empty()) {
        for (const auto& c : columns) {
            const auto det = c.substr(0, c.find(':'));
            if (c != det + ":ramp") {
                continue;
            }
            for (const auto& other : {"absolute", "signed"}) {
                if (columns.contains(det + ":" + other)) {
                    pairs.emplace_back(c, det + ":" + other);
                }
            }
        }
    } else {
        for (const auto& spec : opts.comparisons) {
            const auto gt = spec.find('>');
            if (gt == std::string::npos) {
                throw ConfigError("comparison '" + spec + "' must look like a>b");
            }
            pairs.emplace_back(spec.substr(0, gt), spec.substr(gt + 1));
        }
    }
    if (pairs.empty()) {
        throw ConfigError("no comparisons to run");
    }

    std::vector<WilcoxonResult> tests;
    for (const auto& [a, b] : pairs) {
        std::vector<double> x, y;
        for (const auto& [ds, cols] : table) {
            const auto ia = cols.find(a);
            const auto ib = cols.find(b);
            if (ia != cols.end() && ib != cols.end()) {
                x.push_back(ia->second);
                y.push_back(ib->second);
            }
        }
        if (x.empty()) {
            throw ConfigError("no datasets have both '" + a + "' and '" + b + "'");
        }
        try {
            tests.push_back(wilcoxon_one_sided(x, y));
        } catch (const Error& e) {
            throw Error(a + " > " + b + ": " + e.what());
        }
        log << a << " > " << b << ": " << x.size() << " paired datasets\n";
    }
    std::vector<double> p;
    for (const auto& t : tests) {
        p.push_back(t.p_value);
    }
    const auto adjusted = opts.holm ? holm_bonferroni(p) : p;

    out << "comparison,n,statistic,method,p" << (opts.holm ? ",p_holm" : "") << '\n';
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        out << pairs[i].first << " > " << pairs[i].second << ',' << tests[i].n << ','
            << csv::format_double(tests[i].statistic) << ',' << (tests[i].exact ? "exact" : "normal") << ','
            << pformat(tests[i].p_value);
        if (opts.holm) {
            out << ',' << pformat(adjusted[i]);
        }
        out << '\n';
    }
    return 0;
}

// --- diagnose -------------------------------------------------------------

int cmd_diagnose(const DiagnoseOptions& opts, std::ostream& out, std::ostream& log) {
    const Schema schema = read_schema_file(opts.schema_path);
    const Dataset ds = read_csv_file(opts.csv, schema);
    if (!ds.labels()) {
        throw ConfigError("diagnose needs a labelled dataset");
    }
    const auto report = directionality_diagnostic(ds, opts.tau);
    std::size_t width = 10;
    for (const auto& r : report) {
        width = std::max(width, r.name.size() + 2);
    }
    out << std::left << std::setw(static_cast<int>(width)) << "attribute" << std::setw(11) << "direction"
        << std::setw(14) << "normal_mean" << std::setw(16) << "anomalous_mean" << std::setw(12)
        << "difference" << "flag\n";
    for (const auto& r : report) {
        out << std::setw(static_cast<int>(width)) << r.name << std::setw(11) << to_string(r.direction)
            << std::setw(14) << fixed3(r.normal_mean) << std::setw(16) << fixed3(r.anomalous_mean)
            << std::setw(12) << fixed3(r.difference) << (r.flagged ? "*" : "") << '\n';
    }
    const auto flagged = std::count_if(report.begin(), report.end(), [](const auto& r) { return r.flagged; });
    if (flagged == 0) {
        out << "\nno directional attribute flagged\n";
        return 0;
    }
    out << "\nsuggested schema edits (not applied):\n";
    out << "--- " << opts.schema_path << "\n+++ " << opts.schema_path << " (suggested)\n";
    for (const auto& r : report) {
        if (r.flagged) {
            out << "-" << csv::escape(r.name) << ',' << to_string(r.direction) << '\n';
            out << "+" << csv::escape(r.name) << ",none\n";
        }
    }
    log << flagged << " attribute(s) flagged\n";
    return 0;
}

}  // namespace dirad::cli
