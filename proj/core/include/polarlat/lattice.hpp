#pragma once

#include <stdexcept>

namespace polarlat {

/// One-dimensional scaled two-power partition chain alpha*(Z / 2Z / ... / 2^(r-1)Z).
/// Level l (1-based) is the lattice 2^(l-1)*alpha*Z with cell volume 2^(l-1)*alpha.
struct PartitionChain {
    double alpha;
    int levels;

    PartitionChain(double alpha_, int levels_) : alpha(alpha_), levels(levels_) {
        if (!(alpha > 0.0))
            throw std::invalid_argument("PartitionChain: alpha must be positive");
        if (levels < 2)
            throw std::invalid_argument("PartitionChain: need at least two lattices");
    }

    double cell_volume(int level) const;
};

/// Noise standard deviations of the main (Bob) and wiretap (Eve) channels.
/// Eve must be noisier; everything downstream assumes degradedness.
struct NoiseModel {
    double sigma_b;
    double sigma_e;

    NoiseModel(double sigma_b_, double sigma_e_) : sigma_b(sigma_b_), sigma_e(sigma_e_) {
        if (!(sigma_b > 0.0) || !(sigma_e > 0.0))
            throw std::invalid_argument("NoiseModel: sigmas must be positive");
        if (!(sigma_e > sigma_b))
            throw std::invalid_argument("NoiseModel: sigma_e must exceed sigma_b");
    }
};

/// x mod the level-l lattice, mapped into the half-open cell [-V/2, V/2).
double mod_lattice(double x, const PartitionChain& chain, int level);

/// Lattice-aliased Gaussian density f_{sigma,Lambda}(n). The lattice sum is
/// truncated at |n - lambda| <= 10*sigma + V, keeping the result within 1e-12
/// of the full sum.
double aliased_gaussian_pdf(double n, double sigma, const PartitionChain& chain, int level);

/// Natural log of the aliased density, stable for sigma far below the cell size.
double log_aliased_gaussian_pdf(double n, double sigma, const PartitionChain& chain, int level);

/// Differential entropy (bits) of the aliased noise over one cell.
double differential_entropy(const PartitionChain& chain, int level, double sigma);

/// Mod-lattice channel capacity log2 V - h(Lambda, sigma^2), in bits.
double mod_channel_capacity(const PartitionChain& chain, int level, double sigma);

/// Capacity of the binary partition channel Lambda_l / Lambda_{l+1}, in bits.
double partition_channel_capacity(const PartitionChain& chain, int level, double sigma);

/// Volume-to-noise ratio V(Lambda)^2 / sigma^2 (n = 1).
double vnr(const PartitionChain& chain, int level, double sigma);

}  // namespace polarlat
