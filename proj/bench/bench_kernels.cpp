// Parallel kernels against their serial references. OMP_NUM_THREADS sets
// the thread count of the parallel versions.

#include <benchmark/benchmark.h>

#include <random>

#include "dirad/distance.hpp"
#include "dirad/neighbours.hpp"

namespace {

dirad::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    dirad::Matrix m(rows, cols);
    for (auto& x : m.data()) x = g(rng);
    return m;
}

const auto kSpec = dirad::DistanceSpec::uniform(10, dirad::DistanceVariant::ramp);

void BM_DistanceMatrix(benchmark::State& state) {
    const auto train = random_matrix(static_cast<std::size_t>(state.range(0)), 10, 1);
    const auto queries = random_matrix(200, 10, 2);
    for (auto _ : state) benchmark::DoNotOptimize(dirad::distance_matrix(queries, train, kSpec));
}

void BM_DistanceMatrixSerial(benchmark::State& state) {
    const auto train = random_matrix(static_cast<std::size_t>(state.range(0)), 10, 1);
    const auto queries = random_matrix(200, 10, 2);
    for (auto _ : state) benchmark::DoNotOptimize(dirad::distance_matrix_serial(queries, train, kSpec));
}

void BM_KnnBatch(benchmark::State& state) {
    const auto train = random_matrix(static_cast<std::size_t>(state.range(0)), 10, 1);
    const auto queries = random_matrix(200, 10, 2);
    for (auto _ : state) benchmark::DoNotOptimize(dirad::knn_batch(train, queries, 8, kSpec));
}

void BM_KnnBatchSerial(benchmark::State& state) {
    const auto train = random_matrix(static_cast<std::size_t>(state.range(0)), 10, 1);
    const auto queries = random_matrix(200, 10, 2);
    for (auto _ : state) benchmark::DoNotOptimize(dirad::knn_batch_serial(train, queries, 8, kSpec));
}

void BM_SelfKnn(benchmark::State& state) {
    const auto train = random_matrix(static_cast<std::size_t>(state.range(0)), 10, 1);
    for (auto _ : state) benchmark::DoNotOptimize(dirad::self_knn(train, 38, kSpec));
}

void BM_SelfKnnSerial(benchmark::State& state) {
    const auto train = random_matrix(static_cast<std::size_t>(state.range(0)), 10, 1);
    for (auto _ : state) benchmark::DoNotOptimize(dirad::self_knn_serial(train, 38, kSpec));
}

}  // namespace

BENCHMARK(BM_DistanceMatrix)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistanceMatrixSerial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnBatch)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnBatchSerial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SelfKnn)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SelfKnnSerial)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
