#include <gtest/gtest.h>

#include <random>

#include "dirad/alp.hpp"
#include "oracles.hpp"

using namespace dirad;
using V = DistanceVariant;

TEST(AlpDefaults, LogRule) {
    EXPECT_EQ(default_alp_k(1000), 38u);
    EXPECT_EQ(default_alp_l(1000), 41u);
    EXPECT_EQ(default_alp_k(3), 6u);
    EXPECT_EQ(default_alp_l(2), 4u);
    EXPECT_EQ(default_alp_l(10), 14u);
}

TEST(AlpDefaults, ClampedAtFit) {
    std::mt19937_64 rng(1);
    const Dataset ten(oracle::schema(2, 0), oracle::random_matrix(rng, 10, 2));
    const auto m = AlpModel::fit(ten, {});
    EXPECT_EQ(m.k(), 9u);   // round(5.5 ln 10) = 13, clamped to n - 1
    EXPECT_EQ(m.l(), 10u);  // 14, clamped to n
    const Dataset two(oracle::schema(1, 0), oracle::random_matrix(rng, 2, 1));
    const auto m2 = AlpModel::fit(two, {});
    EXPECT_EQ(m2.k(), 1u);
    EXPECT_EQ(m2.l(), 2u);
}

TEST(AlpFit, PaperDefaultsForThousandRecords) {
    std::mt19937_64 rng(2);
    const Dataset ds(oracle::schema(3, 0), oracle::random_matrix(rng, 1000, 3));
    const auto m = AlpModel::fit(ds, {});
    EXPECT_EQ(m.k(), 38u);
    EXPECT_EQ(m.l(), 41u);
    EXPECT_EQ(m.train_nn_dists().rows(), 1000u);
    EXPECT_EQ(m.train_nn_dists().cols(), 38u);
}

TEST(AlpFit, ExplicitAndErrors) {
    std::mt19937_64 rng(3);
    const Dataset ds(oracle::schema(2, 0), oracle::random_matrix(rng, 6, 2));
    const auto m = AlpModel::fit(ds, {2, 3, V::ramp});
    EXPECT_EQ(m.k(), 2u);
    EXPECT_EQ(m.l(), 3u);
    EXPECT_THROW(AlpModel::fit(ds, {6, 3, V::ramp}), ConfigError);
    EXPECT_THROW(AlpModel::fit(ds, {2, 7, V::ramp}), ConfigError);
    EXPECT_THROW(AlpModel::fit(ds, {2, 3, V::signed_}), ConfigError);
    const Dataset one(oracle::schema(2, 0), oracle::random_matrix(rng, 1, 2));
    EXPECT_THROW(AlpModel::fit(one, {}), ConfigError);
}

TEST(AlpFit, DuplicatesGiveZeroTable) {
    const Dataset ds(oracle::schema(2, 0), Matrix(5, 2, 1.5));
    const auto m = AlpModel::fit(ds, {3, 4, V::absolute});
    for (double v : m.train_nn_dists().data()) EXPECT_EQ(v, 0.0);
    // The query coincides with the duplicates: every lp is 0/0 -> 1.
    EXPECT_NEAR(m.normality_score(std::vector<double>{1.5, 1.5}), 1.0, 1e-15);
}

TEST(Wmax, Basics) {
    EXPECT_EQ(wmax(std::vector<double>{0.7}, std::vector<double>{1.0}), 0.7);
    EXPECT_NEAR(wmax(std::vector<double>{0.2, 0.8}, std::vector<double>{2.0 / 3.0, 1.0 / 3.0}), 0.6, 1e-15);
    const auto w = std::vector<double>{0.5, 1.0 / 3.0, 1.0 / 6.0};
    EXPECT_NEAR(wmax(std::vector<double>{0.3, 0.3, 0.3}, w), 0.3, 1e-15);
    EXPECT_THROW(wmax(std::vector<double>{1, 2}, std::vector<double>{1}), DimensionError);
}

TEST(Wmax, BetweenMinAndMax) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + rng() % 10;
        std::vector<double> v(k);
        for (auto& x : v) x = u(rng);
        std::vector<double> w(k);
        double total = 0;
        for (std::size_t i = 0; i < k; ++i) total += (w[i] = static_cast<double>(k - i));
        for (auto& x : w) x /= total;
        const double r = wmax(v, w);
        EXPECT_GE(r, *std::min_element(v.begin(), v.end()) - 1e-15);
        EXPECT_LE(r, *std::max_element(v.begin(), v.end()) + 1e-15);
    }
}

TEST(AlpScore, HandTrace) {
    // train {0, 1, 3}, k = l = 1; y = 5: d_1 = 2 via record 3, whose own d_1 is 2.
    const Dataset ds({{"x", Direction::none}}, Matrix::from_rows({{0}, {1}, {3}}));
    const auto m = AlpModel::fit(ds, {1, 1, V::absolute});
    const std::vector<double> y{5};
    EXPECT_EQ(m.localised_proximity(y, 1), 0.5);
    EXPECT_EQ(m.normality_score(y), 0.5);
    EXPECT_EQ(m.anomaly_score(y), 0.5);
}

TEST(AlpScore, ProximityValues) {
    // D_1 = 2 for the only neighbour; d_1 = 6 gives 2 / 8.
    const Dataset ds({{"x", Direction::none}}, Matrix::from_rows({{0}, {2}}));
    const auto m = AlpModel::fit(ds, {1, 1, V::absolute});
    EXPECT_EQ(m.localised_proximity(std::vector<double>{8}, 1), 0.25);
    // Query on a training record: d_1 = 0 < D_1 -> 1.
    EXPECT_EQ(m.localised_proximity(std::vector<double>{2}, 1), 1.0);
    EXPECT_THROW(m.localised_proximity(std::vector<double>{2}, 2), ConfigError);
}

TEST(AlpScore, MatchesDefinitionOnRandomData) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Dataset ds(oracle::schema(2, 1), oracle::random_matrix(rng, 30, 3));
        const std::vector<V> variants{V::ramp, V::ramp, V::absolute};
        const std::size_t k = 1 + rng() % 8;
        const std::size_t l = 1 + rng() % 10;
        const auto m = AlpModel::fit(ds, {k, l, V::ramp});
        const auto y = oracle::row(oracle::random_matrix(rng, 1, 3), 0);

        const auto wk = oracle::weights(k);
        const auto wl = oracle::weights(l);
        const auto nn = oracle::sorted_neighbours(ds.records(), y, variants);
        std::vector<double> lp;
        for (std::size_t i = 0; i < k; ++i) {
            double local = 0.0;
            for (std::size_t j = 0; j < l; ++j) {
                const auto t = nn[j].second;
                const auto own = oracle::sorted_neighbours(ds.records(), oracle::row(ds.records(), t), variants, t);
                local += wl[j] * own[i].first;
            }
            const double d = nn[i].first;
            lp.push_back(local + d > 0 ? local / (local + d) : 1.0);
        }
        std::sort(lp.rbegin(), lp.rend());
        double expect = 0.0;
        for (std::size_t i = 0; i < k; ++i) expect += wk[i] * lp[i];
        EXPECT_NEAR(m.normality_score(y), expect, 1e-12);
    }
}

TEST(AlpScore, RangeScaleInvarianceAndBatch) {
    std::mt19937_64 rng(6);
    const auto x = oracle::random_matrix(rng, 60, 3);
    const auto q = oracle::random_matrix(rng, 30, 3, -4, 4);
    Matrix x2 = x;
    Matrix q2 = q;
    for (auto& v : x2.data()) v *= 4.0;
    for (auto& v : q2.data()) v *= 4.0;
    for (auto v : {V::absolute, V::ramp}) {
        const auto a = AlpModel::fit(Dataset(oracle::schema(3, 0), x), {5, 7, v});
        const auto b = AlpModel::fit(Dataset(oracle::schema(3, 0), x2), {5, 7, v});
        const auto sa = a.normality_scores(q);
        const auto sb = b.normality_scores(q2);
        for (std::size_t i = 0; i < q.rows(); ++i) {
            EXPECT_GE(sa[i], 0.0);
            EXPECT_LE(sa[i], 1.0);
            EXPECT_NEAR(sa[i], sb[i], 1e-12);
            EXPECT_EQ(sa[i], a.normality_score(q.row(i)));
        }
    }
}

TEST(AlpScore, PermutationInvariance) {
    // Absolute distances on continuous data have no ties. Ramp distances tie
    // at zero, and tied neighbours are chosen by row index.
    std::mt19937_64 rng(7);
    const auto x = oracle::random_matrix(rng, 40, 2);
    std::vector<std::size_t> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto q = oracle::random_matrix(rng, 20, 2);
    const auto a = AlpModel::fit(Dataset(oracle::schema(2, 0), x), {6, 8, V::absolute});
    const auto b = AlpModel::fit(Dataset(oracle::schema(2, 0), x.select_rows(perm)), {6, 8, V::absolute});
    const auto sa = a.normality_scores(q);
    const auto sb = b.normality_scores(q);
    for (std::size_t i = 0; i < q.rows(); ++i) EXPECT_NEAR(sa[i], sb[i], 1e-12);
}

TEST(AlpScore, VariantCollapseWithoutDirectionalAttributes) {
    std::mt19937_64 rng(8);
    const Dataset ds(oracle::schema(0, 3), oracle::random_matrix(rng, 50, 3));
    const auto q = oracle::random_matrix(rng, 20, 3);
    EXPECT_EQ(AlpModel::fit(ds, {}).anomaly_scores(q),
              AlpModel::fit(ds, {std::nullopt, std::nullopt, V::ramp}).anomaly_scores(q));
}
