#pragma once

#include <cstdint>
#include <vector>

#include "polarlat/codec.hpp"
#include "polarlat/polar.hpp"

namespace polarlat {

struct ExperimentConfig {
    long trials = 1000;
    std::uint64_t seed = 0;
    int blocks = 1;  // 1: independent frames; >= 2: chained sequences of that many payload blocks

    ExperimentConfig() = default;
    ExperimentConfig(long trials_, std::uint64_t seed_, int blocks_ = 1)
        : trials(trials_), seed(seed_), blocks(blocks_) {
        if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
    }
};

/// Frame-error-rate estimate with a 95% Wilson interval and per-level error
/// counts. Identical (spec, config) inputs reproduce bit-identical reports.
struct FerReport {
    long trials = 0;
    long errors = 0;
    double fer = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
    std::vector<long> level_errors;
};

/// Monte-Carlo reliability run over AWGN(sigma_b) plus mod-lattice reduction.
/// Each trial uses its own counter-RNG stream indexed by trial number.
FerReport simulate_bob(const SecrecyCodeSpec& spec, const ExperimentConfig& cfg);

struct RateGridPoint {
    double alpha;
    int levels;
    double sigma_b;
    double sigma_e;
};

/// Infinite-blocklength rate accounting from the chain capacities, reported in
/// both logarithm bases, with the epsilon decomposition of the rate identity.
struct RateTableRow {
    RateGridPoint point{};
    std::vector<double> c_v;  // per-level partition capacity at sigma_b, bits
    std::vector<double> c_w;  // per-level partition capacity at sigma_e, bits
    double rate_bits = 0.0;
    double bound_bits = 0.0;
    double gap_bits = 0.0;
    double rate_nats = 0.0;
    double bound_nats = 0.0;
    double gap_nats = 0.0;
    double eps1_bits = 0.0;
    double eps_b_bits = 0.0;
    double eps_e_bits = 0.0;
};

std::vector<RateTableRow> rate_table(const std::vector<RateGridPoint>& grid);

/// Exact I(M; Z^N) in bits by exhausting every message/random assignment and
/// the full quantized output space. Only feasible for r = 2, N <= 4 and at
/// most 2^12 joint outcomes; larger instances are refused.
double exact_leakage_small(const SecrecyCodeSpec& spec);

struct LeakageRow {
    int block_length = 0;
    double bound = 0.0;     // constructive bound from the code spec
    double envelope = 0.0;  // analytic r * N * 2^(-N^beta)
};

/// Constructive bound beside the analytic envelope for each spec; throws if a
/// bound ever exceeds its envelope.
std::vector<LeakageRow> leakage_scaling_report(const std::vector<SecrecyCodeSpec>& specs);

/// Convenience overload that builds the code specs for each block length.
std::vector<LeakageRow> leakage_scaling_report(const PartitionChain& chain, const NoiseModel& noise,
                                               double beta, const std::vector<int>& n_exps,
                                               const QuantizerConfig& q, int blocks_per_level = 8);

}  // namespace polarlat
