#pragma once

// Internal symbol-pair machinery behind DiscreteBms and the polarization
// evolution. A PairProb is one output symbol y of a symmetric binary-input
// channel, stored as (a, b) = (P(y|0), P(y|1)) with a >= b; the mirrored
// partner symbol (b, a) is implied and never stored. Self-symmetric symbols
// are split into two half-mass symbols before entering this representation.

#include <cmath>
#include <cstddef>
#include <vector>

namespace polarlat::detail {

struct PairProb {
    double a;  // P(y|0)
    double b;  // P(y|1), b <= a
};

inline PairProb canonical(double p, double q) {
    return p >= q ? PairProb{p, q} : PairProb{q, p};
}

// Per-pair mutual information contribution (both orientations counted):
// a*log2(2a/(a+b)) + b*log2(2b/(a+b)).
inline double pair_mi_term(double a, double b) {
    const double s = a + b;
    if (s <= 0.0) return 0.0;
    double t = 0.0;
    if (a > 0.0) t += a * std::log2(2.0 * a / s);
    if (b > 0.0) t += b * std::log2(2.0 * b / s);
    return t;
}

inline double pairs_mi(const std::vector<PairProb>& ps) {
    double acc = 0.0;
    for (const auto& p : ps) acc += pair_mi_term(p.a, p.b);
    return acc;
}

inline double pairs_bhattacharyya(const std::vector<PairProb>& ps) {
    double acc = 0.0;
    for (const auto& p : ps) acc += 2.0 * std::sqrt(p.a * p.b);
    return acc;
}

// Arikan "minus" transform; |out| = 2*|in|^2 canonical pairs.
std::vector<PairProb> transform_minus(const std::vector<PairProb>& in);

// Arikan "plus" transform; |out| = 2*|in|^2 canonical pairs.
std::vector<PairProb> transform_plus(const std::vector<PairProb>& in);

// Reduce to at most target_pairs symbols by merging outputs (stochastically
// degraded result: I drops, Z grows).
std::vector<PairProb> reduce_degrade(const std::vector<PairProb>& in, std::size_t target_pairs);

// Reduce to at most target_pairs symbols by moving mass outward to extreme
// likelihood ratios (stochastically upgraded result: I grows, Z drops).
std::vector<PairProb> reduce_upgrade(const std::vector<PairProb>& in, std::size_t target_pairs);

}  // namespace polarlat::detail
