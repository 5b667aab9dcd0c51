#include <benchmark/benchmark.h>

#include "polarlat/codec.hpp"
#include "polarlat/rng.hpp"

using namespace polarlat;

namespace {

SecrecyCodeSpec bench_spec(int n_exp) {
    static const PartitionChain chain(2.5, 3);
    static const NoiseModel noise(1.0, 2.0);
    return build_spec(chain, noise, n_exp, 0.3, QuantizerConfig(64));
}

}  // namespace

static void EncodeFrame(benchmark::State& state) {
    const auto spec = bench_spec(static_cast<int>(state.range(0)));
    std::size_t msg_len = 0;
    for (const auto& plan : spec.plans) msg_len += plan.part.a.size();
    CounterRng rng(1);
    std::vector<std::uint8_t> msg(msg_len, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(encode(msg, rng, spec));
    state.SetComplexityN(spec.block_length());
}
BENCHMARK(EncodeFrame)->Arg(6)->Arg(8)->Arg(10)->Complexity();

static void MultistageDecode(benchmark::State& state) {
    const auto spec = bench_spec(static_cast<int>(state.range(0)));
    std::size_t msg_len = 0;
    for (const auto& plan : spec.plans) msg_len += plan.part.a.size();
    CounterRng rng(1);
    std::vector<std::uint8_t> msg(msg_len, 0);
    for (auto& b : msg) b = rng.next_bit();
    const auto enc = encode(msg, rng, spec);
    const PartitionChain chain = spec.chain();
    std::vector<double> obs(enc.frame.symbols);
    for (auto& z : obs)
        z = mod_lattice(z + spec.sigma_b * rng.next_normal(), chain, chain.levels);
    for (auto _ : state)
        benchmark::DoNotOptimize(multistage_decode(obs, spec));
    state.SetComplexityN(spec.block_length());
}
BENCHMARK(MultistageDecode)->Arg(6)->Arg(8)->Arg(10)->Complexity();
