#include "dirad/synthgen.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

namespace dirad {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    // [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double bernoulli(double p) { return uniform() < p ? 1.0 : 0.0; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace

std::string_view to_string(SynthFamily f) noexcept {
    return f == SynthFamily::gaussian ? "gaussian" : "bernoulli";
}

SynthFamily parse_family(std::string_view text) {
    if (text == "gaussian") return SynthFamily::gaussian;
    if (text == "bernoulli") return SynthFamily::bernoulli;
    throw ConfigError("unknown synthetic family '" + std::string(text) +
                      "' (expected gaussian or bernoulli)");
}

void SynthSpec::validate() const {
    const double hi = family == SynthFamily::gaussian ? 1.0 : 0.5;
    if (!(shift >= 0.0 && shift <= hi)) {
        throw ConfigError(std::string(to_string(family)) + " shift must lie in [0, " +
                          (family == SynthFamily::gaussian ? "1" : "0.5") + "]");
    }
    if (n_train == 0 || n_test_normal == 0 || n_test_anomalous == 0 || m == 0) {
        throw ConfigError("synthetic record and attribute counts must be positive");
    }
}

Schema synth_schema(std::size_t m) {
    Schema s;
    for (std::size_t j = 0; j < m; ++j) {
        s.attributes.push_back({"x" + std::to_string(j + 1), Direction::high});
    }
    s.label = LabelSpec{"label", "anomalous", "normal"};
    return s;
}

SynthData generate(const SynthSpec& spec) {
    spec.validate();
    Sampler rng(spec.seed);
    const bool gaussian = spec.family == SynthFamily::gaussian;
    const double p_normal = 0.5 - 0.5 * spec.shift;
    const double p_anomalous = 0.5 + 0.5 * spec.shift;

    auto draw = [&](Matrix& out, std::size_t first, std::size_t count, bool anomalous) {
        for (std::size_t i = first; i < first + count; ++i) {
            for (std::size_t j = 0; j < spec.m; ++j) {
                out(i, j) = gaussian ? rng.gaussian() + (anomalous ? spec.shift : 0.0)
                                     : rng.bernoulli(anomalous ? p_anomalous : p_normal);
            }
        }
    };

    Matrix train(spec.n_train, spec.m);
    draw(train, 0, spec.n_train, false);
    const std::size_t n_test = spec.n_test_normal + spec.n_test_anomalous;
    Matrix test(n_test, spec.m);
    draw(test, 0, spec.n_test_normal, false);
    draw(test, spec.n_test_normal, spec.n_test_anomalous, true);

    std::vector<Label> labels(n_test, Label::normal);
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(spec.n_test_normal), labels.end(),
              Label::anomalous);

    const auto schema = synth_schema(spec.m).attributes;
    return {Dataset(schema, std::move(train)), Dataset(schema, std::move(test), std::move(labels))};
}

std::vector<double> default_shifts(SynthFamily family) {
    const double denom = family == SynthFamily::gaussian ? 10.0 : 20.0;
    std::vector<double> out;
    for (int i = 0; i <= 10; ++i) {
        out.push_back(i / denom);
    }
    return out;
}

std::uint64_t replicate_seed(std::uint64_t base_seed, SynthFamily family, double shift,
                             std::uint64_t replicate) {
    std::uint64_t h = splitmix64(base_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(family));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(shift));
    return splitmix64(h ^ replicate);
}

std::vector<SynthSpec> grid(SynthFamily family, const std::vector<double>& shifts,
                            std::size_t replicates, std::uint64_t base_seed,
                            const SynthSpec& base) {
    if (replicates == 0) {
        throw ConfigError("grid: replicates must be >= 1");
    }
    std::vector<SynthSpec> out;
    out.reserve(shifts.size() * replicates);
    for (double s : shifts) {
        for (std::size_t r = 0; r < replicates; ++r) {
            SynthSpec spec = base;
            spec.family = family;
            spec.shift = s;
            spec.seed = replicate_seed(base_seed, family, s, r);
            out.push_back(spec);
        }
    }
    return out;
}

}  // namespace dirad
