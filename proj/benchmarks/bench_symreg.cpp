#include <benchmark/benchmark.h>

#include <random>

#include "symreg/norms.hpp"
#include "symreg/orlicz_regression.hpp"
#include "symreg/sketch.hpp"
#include "symreg/symnorm_regression.hpp"

using namespace symreg;

namespace {

SparseMatrix random_sparse(std::size_t n, std::size_t d, double density, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (unit(eng) < density) t.push_back({i, j, normal(eng)});
    return SparseMatrix::from_triplets(n, d, std::move(t));
}

Vector random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal;
    Vector v(n);
    for (double& x : v) x = normal(eng);
    return v;
}

void BM_OrliczNorm(benchmark::State& state) {
    const auto y = random_vector(static_cast<std::size_t>(state.range(0)), 1);
    const auto g = OrliczFunction::huber(0.1);
    for (auto _ : state) benchmark::DoNotOptimize(orlicz_norm(g, y));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OrliczNorm)->RangeMultiplier(8)->Range(64, 1 << 18);

void BM_TopKNorm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto y = random_vector(n, 2);
    const auto norm = SymmetricNorm::top_k(n / 5 + 1);
    for (auto _ : state) benchmark::DoNotOptimize(norm(y));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TopKNorm)->RangeMultiplier(8)->Range(64, 1 << 18);

void BM_CountSketch(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_sparse(n, 8, 0.25, 3);
    const CountSketchOp cs(1000, n, 4);
    for (auto _ : state) benchmark::DoNotOptimize(apply_countsketch(cs, a));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}
BENCHMARK(BM_CountSketch)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMicrosecond);

void BM_ApplySymSketch(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_sparse(n, 8, 0.25, 5);
    const auto sk = build_symsketch(SymmetricNorm::l1(), n, 8, 6);
    for (auto _ : state) benchmark::DoNotOptimize(apply_symsketch(sk, a));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}
BENCHMARK(BM_ApplySymSketch)->RangeMultiplier(2)->Range(1 << 12, 1 << 17)->Unit(benchmark::kMillisecond);

void BM_OrliczRegression(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_sparse(n, 5, 1.0, 7);
    auto b = spmv(a, random_vector(5, 8));
    const auto noise = random_vector(n, 9);
    for (std::size_t i = 0; i < n; ++i) b[i] += 0.1 * noise[i];
    const auto g = OrliczFunction::huber(0.1);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(orlicz_regression(a, b, g, 0.3, seed++));
}
BENCHMARK(BM_OrliczRegression)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_SymnormRegression(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_sparse(n, 5, 1.0, 10);
    auto b = spmv(a, random_vector(5, 11));
    const auto noise = random_vector(n, 12);
    for (std::size_t i = 0; i < n; ++i) b[i] += noise[i];
    const auto norm = SymmetricNorm::top_k(n / 5);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(symnorm_regression(a, b, norm, seed++));
}
BENCHMARK(BM_SymnormRegression)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
