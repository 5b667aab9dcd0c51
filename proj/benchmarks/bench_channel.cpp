#include <benchmark/benchmark.h>

#include "polarlat/polar.hpp"

using namespace polarlat;

static void BuildPartitionChannel(benchmark::State& state) {
    const PartitionChain chain(2.5, 3);
    const QuantizerConfig q(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_partition_channel(chain, 1, 1.0, q));
}
BENCHMARK(BuildPartitionChannel)->Arg(64)->Arg(256)->Arg(1024);

static void Polarize(benchmark::State& state) {
    const PartitionChain chain(2.5, 3);
    const QuantizerConfig q(256);
    const auto c = build_partition_channel(chain, 1, 1.0, q);
    const int n_exp = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(polarize(c, n_exp, q));
    state.SetComplexityN(1 << n_exp);
}
BENCHMARK(Polarize)->Arg(4)->Arg(6)->Arg(8)->Complexity();

static void PolarizeUpgrade(benchmark::State& state) {
    const PartitionChain chain(2.5, 3);
    const QuantizerConfig q(256);
    const auto c = build_partition_channel(chain, 1, 2.0, q, MergeDirection::upgrade);
    for (auto _ : state)
        benchmark::DoNotOptimize(polarize(c, 6, q, MergeDirection::upgrade));
}
BENCHMARK(PolarizeUpgrade);
