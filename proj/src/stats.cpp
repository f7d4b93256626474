#include <algorithm>
#include <cmath>
#include <numeric>

#include "dirad/eval.hpp"

namespace dirad {

namespace {

// Magnitudes closer than this (relative) share a rank; differences smaller
// than this relative to their operands count as zero. Inputs are typically
// rounded metric values whose differences carry subtraction noise.
constexpr double kRelTol = 1e-9;

bool same_magnitude(double a, double b) {
    return std::fabs(a - b) <= kRelTol * std::max(std::fabs(a), std::fabs(b));
}

// P(W+ >= w) for n untied ranks 1..n under the symmetric null.
double exact_upper_tail(std::size_t n, double w) {
    const std::size_t max_sum = n * (n + 1) / 2;
    std::vector<double> counts(max_sum + 1, 0.0);
    counts[0] = 1.0;
    for (std::size_t r = 1; r <= n; ++r) {
        for (std::size_t s = max_sum; s >= r; --s) {
            counts[s] += counts[s - r];
        }
    }
    const auto start = static_cast<std::size_t>(std::ceil(w - 1e-9));
    double tail = 0.0;
    for (std::size_t s = std::min(start, max_sum + 1); s <= max_sum; ++s) {
        tail += counts[s];
    }
    return tail / std::ldexp(1.0, static_cast<int>(n));
}

}  // namespace

WilcoxonResult wilcoxon_one_sided(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DimensionError("wilcoxon: samples have different lengths");
    }
    std::vector<double> diffs;
    bool had_zero = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (std::fabs(d) <= kRelTol * std::max(std::fabs(x[i]), std::fabs(y[i])) || d == 0.0) {
            had_zero = true;
            continue;
        }
        diffs.push_back(d);
    }
    const std::size_t n = diffs.size();
    if (n < 5) {
        throw ConfigError("wilcoxon: need at least 5 nonzero differences, got " + std::to_string(n));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::fabs(diffs[a]) < std::fabs(diffs[b]); });

    double w_plus = 0.0;
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && same_magnitude(std::fabs(diffs[order[j + 1]]), std::fabs(diffs[order[i]]))) {
            ++j;
        }
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (diffs[order[k]] > 0.0) {
                w_plus += mid;
            }
        }
        i = j + 1;
    }

    WilcoxonResult result;
    result.statistic = w_plus;
    result.n = n;
    const double nn = static_cast<double>(n);
    if (n <= 25 && tie_term == 0.0 && !had_zero) {
        result.exact = true;
        result.p_value = exact_upper_tail(n, w_plus);
        return result;
    }
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    const double z = (w_plus - mean - 0.5) / std::sqrt(var);
    result.p_value = std::min(1.0, 0.5 * std::erfc(z / std::sqrt(2.0)));
    return result;
}

std::vector<double> holm_bonferroni(std::span<const double> pvals) {
    if (pvals.empty()) {
        throw ConfigError("holm_bonferroni: no p-values");
    }
    for (double p : pvals) {
        if (!(p > 0.0 && p <= 1.0)) {
            throw ConfigError("holm_bonferroni: p-values must lie in (0, 1]");
        }
    }
    const std::size_t m = pvals.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pvals[a] < pvals[b]; });
    std::vector<double> out(m);
    double running = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double adj = std::min(1.0, static_cast<double>(m - i) * pvals[order[i]]);
        running = std::max(running, adj);
        out[order[i]] = running;
    }
    return out;
}

}  // namespace dirad
