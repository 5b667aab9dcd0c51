#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "polarlat/channel.hpp"
#include "polarlat/lattice.hpp"

namespace polarlat {

/// Raised when a constructed code violates a structural requirement (for
/// example the nesting of per-level frozen sets); usually means the
/// quantization was too coarse.
struct construction_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Figures of merit of one synthesized bit-channel.
struct BitChannelStats {
    int index;
    double mi;     // bits
    double bhatt;  // Bhattacharyya parameter
};

/// Track all N = 2^n_exp bit-channels of c through the polar transform,
/// reducing the alphabet to q.bins after every split. With the degrading
/// direction every mi is a lower and every bhatt an upper bound on the exact
/// value; upgrading swaps the roles.
std::vector<BitChannelStats> polarize(const DiscreteBms& c, int n_exp, const QuantizerConfig& q,
                                      MergeDirection dir = MergeDirection::degrade);

/// The four index sets of the wiretap construction. a: reliable for Bob and
/// secure against Eve (message); b: reliable only (random); c: neither
/// (frozen); d: insecure and unreliable (random, block-chained).
struct IndexPartition {
    std::vector<int> a, b, c, d;
    double beta = 0.0;
};

/// Partition [0, N) from Bob-side stats (degraded) and Eve-side stats
/// (upgraded) with threshold 2^(-N^beta), membership inclusive.
IndexPartition classify(const std::vector<BitChannelStats>& stats_v,
                        const std::vector<BitChannelStats>& stats_w, double beta);

enum class BitRole : std::uint8_t { message, random, frozen };

/// Expand a partition into the per-index role map of length n.
std::vector<BitRole> assign_roles(const IndexPartition& p, int n);

/// Per-level construction output: the index partition plus the upgraded
/// Eve-side mutual information of every message index (the certified leakage
/// contributions).
struct LevelPlan {
    int level = 0;
    IndexPartition part;
    std::vector<double> eve_mi_a;  // aligned with part.a
};

/// Complete wiretap code description: everything encode/decode/simulate need.
struct SecrecyCodeSpec {
    double alpha = 0.0;
    int levels = 0;  // chain length r; coded levels are 1..r-1
    double sigma_b = 0.0;
    double sigma_e = 0.0;
    int n_exp = 0;
    double beta = 0.0;
    int mu = 0;
    int blocks_per_level = 0;  // payload blocks per chained sequence
    std::vector<LevelPlan> plans;

    int block_length() const { return 1 << n_exp; }
    PartitionChain chain() const { return PartitionChain(alpha, levels); }
    NoiseModel noise() const { return NoiseModel(sigma_b, sigma_e); }
};

/// Run the full construction: per level, quantize Bob degraded and Eve
/// upgraded, polarize both, classify, and verify that the frozen sets nest
/// across levels.
SecrecyCodeSpec build_spec(const PartitionChain& chain, const NoiseModel& noise, int n_exp,
                           double beta, const QuantizerConfig& q, int blocks_per_level = 8);

/// Message rate sum |A_i| / N in bits per dimension.
double secrecy_rate(const SecrecyCodeSpec& spec);

/// Certified upper bound on I(M; Z^N): the upgraded Eve-side bit-channel
/// mutual information summed over all message indices.
double leakage_bound(const SecrecyCodeSpec& spec);

std::string spec_to_json(const SecrecyCodeSpec& spec);
SecrecyCodeSpec spec_from_json(const std::string& text);

}  // namespace polarlat
