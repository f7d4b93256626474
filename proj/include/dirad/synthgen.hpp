#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "dirad/dataset.hpp"

namespace dirad {

enum class SynthFamily : std::uint8_t { gaussian, bernoulli };

std::string_view to_string(SynthFamily f) noexcept;
SynthFamily parse_family(std::string_view text);

/// Synthetic benchmark configuration.
///
/// gaussian: normal values ~ N(0, 1), anomalous ~ N(shift, 1), shift in [0, 1].
/// bernoulli: normal ~ B(0.5 - 0.5 shift), anomalous ~ B(0.5 + 0.5 shift),
/// shift in [0, 0.5].
struct SynthSpec {
    SynthFamily family = SynthFamily::gaussian;
    double shift = 0.0;
    std::size_t n_train = 1000;
    std::size_t n_test_normal = 100;
    std::size_t n_test_anomalous = 100;
    std::size_t m = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthData {
    Dataset train;  // unlabelled normal records
    Dataset test;   // normal records first, then anomalous, labelled
};

/// Pure function of the spec. Draws come from std::mt19937_64 seeded with
/// `spec.seed`; uniforms use the top 53 bits, Gaussians use the Box-Muller
/// transform (both outputs of each pair are used), Bernoulli draws compare a
/// uniform against p. Values are generated row-major: training records, then
/// normal test records, then anomalous test records.
SynthData generate(const SynthSpec& spec);

/// Shift values 0, 0.1, ..., 1 (gaussian) or 0, 0.05, ..., 0.5 (bernoulli).
std::vector<double> default_shifts(SynthFamily family);

/// Mixes (base_seed, family, shift, replicate) into a replicate seed.
std::uint64_t replicate_seed(std::uint64_t base_seed, SynthFamily family, double shift,
                             std::uint64_t replicate);

/// Shift-major enumeration: for each shift, replicates 0..r-1.
std::vector<SynthSpec> grid(SynthFamily family, const std::vector<double>& shifts,
                            std::size_t replicates, std::uint64_t base_seed,
                            const SynthSpec& base = {});

/// Schema for generated data: attributes x1..xm, all high, label column "label".
Schema synth_schema(std::size_t m);

}  // namespace dirad
