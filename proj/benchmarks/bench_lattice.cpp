#include <benchmark/benchmark.h>

#include "polarlat/lattice.hpp"

using namespace polarlat;

static void AliasedPdf(benchmark::State& state) {
    const PartitionChain chain(2.5, 3);
    const double sigma = static_cast<double>(state.range(0));
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(aliased_gaussian_pdf(x, sigma, chain, 2));
        x += 1e-3;
    }
}
BENCHMARK(AliasedPdf)->Arg(1)->Arg(10)->Arg(100);

static void LogAliasedPdf(benchmark::State& state) {
    const PartitionChain chain(2.5, 3);
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_aliased_gaussian_pdf(x, 1.0, chain, 2));
        x += 1e-3;
    }
}
BENCHMARK(LogAliasedPdf);

static void DifferentialEntropy(benchmark::State& state) {
    const PartitionChain chain(2.5, 3);
    const double sigma = state.range(0) / 10.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(differential_entropy(chain, 2, sigma));
}
BENCHMARK(DifferentialEntropy)->Arg(5)->Arg(10)->Arg(20);
