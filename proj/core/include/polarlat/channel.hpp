#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "polarlat/lattice.hpp"

namespace polarlat {

/// One output symbol of a symmetric binary-input channel together with its
/// implied mirror symbol. p0/p1 are the likelihoods under inputs 0/1 with
/// p0 >= p1; the mirror (p1, p0) is not stored. A self-paired symbol is its
/// own mirror (p0 == p1) and is counted once.
struct SymbolPair {
    double p0;
    double p1;
    bool self_paired = false;
};

/// Finite binary-input memoryless symmetric channel in symmetrized form.
class DiscreteBms {
 public:
    DiscreteBms() = default;
    explicit DiscreteBms(std::vector<SymbolPair> pairs);

    const std::vector<SymbolPair>& pairs() const { return pairs_; }
    std::size_t output_symbols() const;

 private:
    std::vector<SymbolPair> pairs_;
};

/// Output alphabet budget for quantized channel construction.
struct QuantizerConfig {
    int bins;
    explicit QuantizerConfig(int mu) : bins(mu) {
        if (mu < 8 || mu % 2 != 0)
            throw std::invalid_argument("QuantizerConfig: bins must be even and >= 8");
    }
};

/// Which side the quantization error falls on. Degrading keeps the computed
/// channel pessimistic (I low, Z high); upgrading keeps it optimistic (I high,
/// Z low). Reliability sets use degraded stats, secrecy sets upgraded ones, so
/// each classification errs safely.
enum class MergeDirection { degrade, upgrade };

/// Documented quantization tolerance delta(mu): computed mutual information is
/// within this of the continuous value for the builders below.
double quantization_tolerance(const QuantizerConfig& q);

/// Quantized Lambda_level / Lambda_{level+1} channel at noise sigma. Inputs
/// {0,1} map to coset representatives {0, 2^(level-1)*alpha}; the output lives
/// in the level+1 cell.
DiscreteBms build_partition_channel(const PartitionChain& chain, int level, double sigma,
                                    const QuantizerConfig& q,
                                    MergeDirection dir = MergeDirection::degrade);

/// Quantized chain-rule equivalent channel W'(Z; X_level | X_1..X_{level-1}).
/// The output lives in the top-level cell and the conditional density averages
/// the aliased Gaussian over the coset shifts, inputs taken uniform.
DiscreteBms build_equivalent_channel(const PartitionChain& chain, int level, double sigma,
                                     const QuantizerConfig& q);

/// Merge outputs down to at most q.bins symbols; result is stochastically
/// degraded with respect to the input.
DiscreteBms degrading_merge(const DiscreteBms& c, const QuantizerConfig& q);

/// Reduce to at most q.bins symbols by moving mass outward in likelihood
/// ratio; result is stochastically upgraded with respect to the input.
DiscreteBms upgrading_merge(const DiscreteBms& c, const QuantizerConfig& q);

/// Mutual information under uniform inputs, in bits.
double channel_mi(const DiscreteBms& c);

/// Bhattacharyya parameter sum over the output alphabet.
double channel_bhattacharyya(const DiscreteBms& c);

/// Serialized forms used by golden tests: JSON document and CSV rows
/// (p0,p1,self_paired) at 17 significant digits.
std::string bms_to_json(const DiscreteBms& c);
DiscreteBms bms_from_json(const std::string& text);
void bms_write_csv(const DiscreteBms& c, std::ostream& os);

}  // namespace polarlat
