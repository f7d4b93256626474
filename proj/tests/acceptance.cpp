// Acceptance suite: one PASS/FAIL/SKIP line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "dirad/alp.hpp"
#include "dirad/eval.hpp"
#include "dirad/nnd.hpp"
#include "dirad/synthgen.hpp"
#include "oracles.hpp"

using namespace dirad;
using V = DistanceVariant;

namespace {

struct Outcome {
    enum Kind { pass, fail, skip } kind = pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r = {Outcome::fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.kind == Outcome::pass && secs > limit_s) {
        r = {Outcome::fail, r.detail + "; runtime over " + std::to_string(limit_s) + " s"};
    }
    const char* tag = r.kind == Outcome::pass ? "PASS" : r.kind == Outcome::fail ? "FAIL" : "SKIP";
    if (r.kind == Outcome::fail) ++failures;
    std::printf("%s %2d %-28s %8.2fs  %s\n", tag, id, name, secs, r.detail.c_str());
    std::fflush(stdout);
}

Outcome verdict(bool ok, const std::string& detail) {
    return {ok ? Outcome::pass : Outcome::fail, detail};
}

std::string fmt(double v, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << std::fixed << v;
    return s.str();
}

std::vector<V> variants_for(const std::vector<AttributeSpec>& schema, V v) {
    std::vector<V> out;
    for (const auto& a : schema) out.push_back(a.direction == Direction::none ? V::absolute : v);
    return out;
}

struct ReplicateAuroc {
    std::vector<double> per_replicate;
    double mean = 0.0;
};

ReplicateAuroc synthetic_auroc(SynthFamily family, double shift, std::size_t replicates,
                               const DetectorConfig& cfg, std::uint64_t base_seed) {
    ReplicateAuroc r;
    for (const auto& spec : grid(family, {shift}, replicates, base_seed)) {
        const auto d = generate(spec);
        r.per_replicate.push_back(holdout_auroc(d.train, d.test, cfg));
    }
    for (double a : r.per_replicate) r.mean += a / static_cast<double>(replicates);
    return r;
}

Outcome auroc_oracle() {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 2 + rng() % 199;
        std::vector<double> s(n);
        std::vector<Label> l(n);
        const auto levels = 1 + rng() % 50;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = static_cast<double>(rng() % levels) * 0.1;
            l[i] = rng() % 2 ? Label::anomalous : Label::normal;
        }
        l[0] = Label::anomalous;
        l[n - 1] = Label::normal;
        if (auroc(s, l) != oracle::pairwise_auroc(s, l)) {
            return verdict(false, "mismatch on instance " + std::to_string(t));
        }
    }
    return verdict(true, "500/500 exact");
}

Outcome signed_shortcut() {
    std::mt19937_64 rng(102);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + rng() % 30;
        const std::size_t m = 1 + rng() % 5;
        const std::size_t k = 1 + rng() % std::min<std::size_t>(8, n);
        const Dataset ds(oracle::schema(m, 0), oracle::random_matrix(rng, n, m));
        const auto model = NndModel::fit(ds, {k, V::signed_, 1.0});
        const auto y = oracle::row(oracle::random_matrix(rng, 1, m, -3.0, 3.0), 0);
        const double direct = oracle::weighted_nnd(ds.records(), y, std::vector<V>(m, V::signed_), k);
        const double got = model.raw_score(y);
        worst = std::max(worst, std::fabs(got - direct) / std::max(1.0, std::fabs(direct)));
    }
    std::ostringstream detail;
    detail << "max relative error " << std::scientific << worst;
    return verdict(worst <= 1e-9, detail.str());
}

Outcome variant_collapse() {
    std::mt19937_64 rng(103);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 3 + rng() % 40;
        const std::size_t m = 1 + rng() % 4;
        const Dataset ds(oracle::schema(0, m), oracle::random_matrix(rng, n, m));
        const auto q = oracle::random_matrix(rng, 10, m);
        const std::size_t k = 1 + rng() % std::min<std::size_t>(8, n);
        const auto a = NndModel::fit(ds, {k, V::absolute, 1.0}).anomaly_scores(q);
        const auto r = NndModel::fit(ds, {k, V::ramp, 1.0}).anomaly_scores(q);
        const auto s = NndModel::fit(ds, {k, V::signed_, 1.0}).anomaly_scores(q);
        if (a != r || a != s) return verdict(false, "NND differs on dataset " + std::to_string(t));
        const auto aa = AlpModel::fit(ds, {std::nullopt, std::nullopt, V::absolute, 1.0}).anomaly_scores(q);
        const auto ar = AlpModel::fit(ds, {std::nullopt, std::nullopt, V::ramp, 1.0}).anomaly_scores(q);
        if (aa != ar) return verdict(false, "ALP differs on dataset " + std::to_string(t));
    }
    return verdict(true, "50/50 bit-identical");
}

Outcome ramp_monotonicity() {
    std::mt19937_64 rng(104);
    std::uniform_real_distribution<double> inc(1e-6, 2.0);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng() % 30;
        const std::size_t dir = 1 + rng() % 4;
        const std::size_t adir = rng() % 3;
        const std::size_t k = 1 + rng() % std::min<std::size_t>(8, n);
        const Dataset ds(oracle::schema(dir, adir), oracle::random_matrix(rng, n, dir + adir));
        const auto model = NndModel::fit(ds, {k, V::ramp, 1.0});
        auto y = oracle::row(oracle::random_matrix(rng, 1, dir + adir, -3.0, 3.0), 0);
        const double before = model.raw_score(y);
        y[rng() % dir] += inc(rng);
        if (model.raw_score(y) < before) return verdict(false, "decrease on tuple " + std::to_string(t));
    }
    return verdict(true, "200/200 non-decreasing");
}

Outcome alp_defaults() {
    const auto k = default_alp_k(1000);
    const auto l = default_alp_l(1000);
    return verdict(k == 38 && l == 41, "k=" + std::to_string(k) + " l=" + std::to_string(l));
}

Outcome contraction() {
    if (contract_score(0.0) != 0.5) return verdict(false, "contract(0) != 0.5");
    std::mt19937_64 rng(106);
    std::normal_distribution<double> g(0.0, 3.0);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 4 + rng() % 100;
        std::vector<double> raw(n), contracted(n);
        std::vector<Label> l(n);
        for (std::size_t i = 0; i < n; ++i) {
            raw[i] = std::round(g(rng) * 8.0) / 8.0;
            contracted[i] = contract_score(raw[i]);
            l[i] = i % 2 ? Label::anomalous : Label::normal;
        }
        if (auroc(raw, l) != auroc(contracted, l)) return verdict(false, "AUROC changed on instance " + std::to_string(t));
    }
    return verdict(true, "contract(0)=0.5; AUROC preserved on 200/200");
}

Outcome synthetic_null() {
    std::string detail;
    bool ok = true;
    for (auto family : {SynthFamily::gaussian, SynthFamily::bernoulli}) {
        for (auto v : {V::absolute, V::ramp, V::signed_}) {
            const auto r = synthetic_auroc(family, 0.0, 20, NndConfig{8, v, 1.0}, 7);
            ok &= r.mean >= 0.45 && r.mean <= 0.55;
            detail += std::string(to_string(family)).substr(0, 1) + "/" + std::string(to_string(v)) + "=" +
                      fmt(r.mean, 3) + " ";
        }
    }
    return verdict(ok, detail);
}

Outcome synthetic_ordering() {
    const auto a = synthetic_auroc(SynthFamily::gaussian, 0.5, 20, NndConfig{8, V::absolute, 1.0}, 8);
    const auto r = synthetic_auroc(SynthFamily::gaussian, 0.5, 20, NndConfig{8, V::ramp, 1.0}, 8);
    const auto s = synthetic_auroc(SynthFamily::gaussian, 0.5, 20, NndConfig{8, V::signed_, 1.0}, 8);
    int wins = 0;
    for (std::size_t i = 0; i < 20; ++i) wins += s.per_replicate[i] > a.per_replicate[i];
    const bool ok = s.mean >= r.mean && r.mean > a.mean && wins >= 18;
    return verdict(ok, "signed=" + fmt(s.mean) + " ramp=" + fmt(r.mean) + " abs=" + fmt(a.mean) +
                           " signed>abs in " + std::to_string(wins) + "/20");
}

Outcome alp_ordering() {
    const AlpConfig abs_cfg{std::nullopt, std::nullopt, V::absolute, 1.0};
    const AlpConfig ramp_cfg{std::nullopt, std::nullopt, V::ramp, 1.0};
    const auto a = synthetic_auroc(SynthFamily::gaussian, 0.5, 10, abs_cfg, 9);
    const auto r = synthetic_auroc(SynthFamily::gaussian, 0.5, 10, ramp_cfg, 9);
    return verdict(r.mean > a.mean, "ramp=" + fmt(r.mean) + " abs=" + fmt(a.mean) + " (k=38, l=41)");
}

Outcome statistics() {
    const std::vector<double> nnd_abs{0.823, 0.971, 0.602, 0.715, 0.901, 0.476, 1.000, 0.648, 0.597, 0.950, 0.995, 0.570};
    const std::vector<double> nnd_ramp{0.922, 0.923, 0.653, 0.769, 0.927, 0.504, 1.000, 0.718, 0.624, 0.976, 0.994, 0.625};
    const std::vector<double> nnd_signed{0.724, 0.716, 0.540, 0.735, 0.804, 0.557, 0.998, 0.683, 0.583, 0.969, 0.995, 0.633};
    const std::vector<double> alp_abs{0.877, 0.895, 0.581, 0.734, 0.927, 0.459, 1.000, 0.648, 0.634, 0.957, 0.872, 0.537};
    const std::vector<double> alp_ramp{0.924, 0.926, 0.636, 0.766, 0.936, 0.484, 1.000, 0.714, 0.621, 0.981, 0.995, 0.654};
    const double p1 = wilcoxon_one_sided(nnd_ramp, nnd_abs).p_value;
    const double p2 = wilcoxon_one_sided(nnd_ramp, nnd_signed).p_value;
    const double p3 = wilcoxon_one_sided(alp_ramp, alp_abs).p_value;
    const auto holm = holm_bonferroni(std::vector<double>{p1, p2});
    const double family = std::max(holm[0], holm[1]);
    const bool ok = std::fabs(p1 - 0.011) <= 0.003 && std::fabs(p2 - 0.021) <= 0.004 &&
                    std::fabs(p3 - 0.0029) <= 0.001 && std::fabs(family - 0.023) <= 0.003;
    return verdict(ok, "nnd ramp>abs " + fmt(p1) + ", ramp>signed " + fmt(p2) + ", alp ramp>abs " + fmt(p3) +
                           ", holm " + fmt(family));
}

Outcome real_data() {
    const char* dir = std::getenv("DIRAD_UCI_DIR");
    if (!dir) return {Outcome::skip, "set DIRAD_UCI_DIR to a folder of <name>.csv + <name>.schema"};
    namespace fs = std::filesystem;
    auto load = [&](const std::string& name) -> std::optional<Dataset> {
        const fs::path csv = fs::path(dir) / (name + ".csv");
        const fs::path schema = fs::path(dir) / (name + ".schema");
        if (!fs::exists(csv) || !fs::exists(schema)) return std::nullopt;
        return read_csv_file(csv.string(), read_schema_file(schema.string()));
    };
    auto cv = [](const Dataset& ds, V v) {
        const auto plan = make_folds(ds.indices_with(Label::normal).size(), 5, 0);
        return run_cv(ds, NndConfig{8, v, 1.0}, plan).mean_auroc;
    };
    std::string detail;
    bool ok = true;
    int checked = 0;
    if (auto ds = load("qualitative-bankruptcy")) {
        const double a = cv(*ds, V::absolute);
        ok &= a >= 0.99;
        detail += "qualitative-bankruptcy abs=" + fmt(a, 3) + " ";
        ++checked;
    }
    if (auto ds = load("wisconsin")) {
        const double a = cv(*ds, V::absolute);
        ok &= std::fabs(a - 0.995) <= 0.02;
        detail += "wisconsin abs=" + fmt(a, 3) + " ";
        ++checked;
    }
    if (auto ds = load("ai4i2020")) {
        const double a = cv(*ds, V::absolute);
        const double r = cv(*ds, V::ramp);
        ok &= r - a >= 0.05;
        detail += "ai4i2020 ramp=" + fmt(r, 3) + " abs=" + fmt(a, 3);
        ++checked;
    }
    if (checked == 0) return {Outcome::skip, std::string("no UCI files found in ") + dir};
    return verdict(ok, detail);
}

Outcome leakage() {
    std::mt19937_64 rng(112);
    std::normal_distribution<double> g;
    for (int run = 0; run < 10; ++run) {
        SynthSpec spec;
        spec.shift = 0.5;
        spec.n_train = 1;
        spec.n_test_normal = 80;
        spec.n_test_anomalous = 20;
        spec.m = 5;
        spec.seed = 1000 + static_cast<std::uint64_t>(run);
        const auto ds = generate(spec).test;
        const auto plan = make_folds(80, 5, static_cast<std::uint64_t>(run));
        const std::size_t fold = static_cast<std::size_t>(run) % 5;
        const auto normals = ds.indices_with(Label::normal);
        auto rows = ds.indices_with(Label::anomalous);
        for (auto pos : plan.folds[fold].test) rows.push_back(normals[pos]);
        Matrix perturbed = ds.records();
        for (auto r : rows) {
            for (std::size_t j = 0; j < perturbed.cols(); ++j) perturbed(r, j) += 100.0 * g(rng);
        }
        const Dataset changed(ds.schema(), perturbed, ds.labels());
        for (const DetectorConfig& cfg : {DetectorConfig{NndConfig{8, V::signed_, 1.0}},
                                          DetectorConfig{AlpConfig{std::nullopt, std::nullopt, V::ramp, 1.0}}}) {
            const auto before = fit_fold(ds, cfg, plan, fold);
            const auto after = fit_fold(changed, cfg, plan, fold);
            if (serialize(before) != serialize(after) || !(before == after)) {
                return verdict(false, "model changed in run " + std::to_string(run));
            }
        }
    }
    return verdict(true, "10/10 runs bit-identical scaler and model");
}

}  // namespace

int main() {
    criterion(1, "auroc-oracle", 5, auroc_oracle);
    criterion(2, "signed-shortcut", 5, signed_shortcut);
    criterion(3, "variant-collapse", 5, variant_collapse);
    criterion(4, "ramp-monotonicity", 5, ramp_monotonicity);
    criterion(5, "alp-defaults", 1, alp_defaults);
    criterion(6, "contraction-anchors", 5, contraction);
    criterion(7, "synthetic-null", 120, synthetic_null);
    criterion(8, "synthetic-ordering-nnd", 180, synthetic_ordering);
    criterion(9, "synthetic-ordering-alp", 300, alp_ordering);
    criterion(10, "statistics-reproduction", 1, statistics);
    criterion(11, "real-data-spot-checks", 600, real_data);
    criterion(12, "leakage", 60, leakage);
    std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
