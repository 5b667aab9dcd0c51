#include "polarlat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polarlat {

namespace {

void check_level(const PartitionChain& chain, int level) {
    if (level < 1 || level > chain.levels)
        throw std::invalid_argument("level out of range for partition chain");
}

void check_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("sigma must be positive and finite");
}

int truncation_terms(double sigma, double volume) {
    // Covers |n - lambda| <= 10*sigma + V once n is reduced into the cell.
    double reach = (10.0 * sigma + volume) / volume;
    return static_cast<int>(std::ceil(reach)) + 1;
}

}  // namespace

double PartitionChain::cell_volume(int level) const {
    if (level < 1 || level > levels)
        throw std::invalid_argument("level out of range for partition chain");
    return std::ldexp(alpha, level - 1);
}

double mod_lattice(double x, const PartitionChain& chain, int level) {
    check_level(chain, level);
    if (!std::isfinite(x))
        throw std::invalid_argument("mod_lattice: x must be finite");
    const double v = chain.cell_volume(level);
    double r = x - v * std::floor(x / v + 0.5);
    // floor arithmetic can land exactly on +V/2; fold it back to the lower edge
    if (r >= 0.5 * v) r -= v;
    if (r < -0.5 * v) r += v;
    return r;
}

double aliased_gaussian_pdf(double n, double sigma, const PartitionChain& chain, int level) {
    check_level(chain, level);
    check_sigma(sigma);
    const double v = chain.cell_volume(level);
    const double n0 = n - v * std::floor(n / v + 0.5);
    const int kmax = truncation_terms(sigma, v);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    double sum = 0.0;
    for (int k = -kmax; k <= kmax; ++k) {
        const double d = n0 - k * v;
        sum += std::exp(-d * d * inv2s2);
    }
    return sum / (std::sqrt(2.0 * M_PI) * sigma);
}

double log_aliased_gaussian_pdf(double n, double sigma, const PartitionChain& chain, int level) {
    check_level(chain, level);
    check_sigma(sigma);
    const double v = chain.cell_volume(level);
    const double n0 = n - v * std::floor(n / v + 0.5);
    const int kmax = truncation_terms(sigma, v);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    // log-sum-exp anchored at the nearest lattice point
    double emax = -std::numeric_limits<double>::infinity();
    for (int k = -kmax; k <= kmax; ++k) {
        const double d = n0 - k * v;
        emax = std::max(emax, -d * d * inv2s2);
    }
    double rest = 0.0;
    for (int k = -kmax; k <= kmax; ++k) {
        const double d = n0 - k * v;
        rest += std::exp(-d * d * inv2s2 - emax);
    }
    return emax + std::log(rest) - std::log(std::sqrt(2.0 * M_PI) * sigma);
}

namespace {

// -f * log2(f) with the x log x -> 0 convention
double entropy_integrand(double x, double sigma, const PartitionChain& chain, int level) {
    const double f = aliased_gaussian_pdf(x, sigma, chain, level);
    if (f < 1e-300) return 0.0;
    return -f * std::log2(f);
}

}  // namespace

double differential_entropy(const PartitionChain& chain, int level, double sigma) {
    check_level(chain, level);
    check_sigma(sigma);
    const double v = chain.cell_volume(level);
    const double a = -0.5 * v, b = 0.5 * v;

    // Trapezoid refinement with Simpson extrapolation; refine until two
    // consecutive Simpson estimates agree below 1e-10 bits.
    auto g = [&](double x) { return entropy_integrand(x, sigma, chain, level); };

    // Seed resolution so a narrow spike (sigma << V) is sampled from the start.
    long n = 64;
    const double spike = v / std::max(sigma, 1e-12);
    while (n < 8.0 * spike && n < (1L << 14)) n *= 2;

    double h = (b - a) / static_cast<double>(n);
    double trap = 0.5 * (g(a) + g(b));
    for (long i = 1; i < n; ++i) trap += g(a + h * static_cast<double>(i));
    trap *= h;

    double simpson_prev = trap;
    bool have_prev = false;
    const long max_intervals = 1L << 23;
    while (n < max_intervals) {
        double mid = 0.0;
        for (long i = 0; i < n; ++i) mid += g(a + h * (static_cast<double>(i) + 0.5));
        const double trap2 = 0.5 * trap + 0.5 * h * mid;
        const double simpson = (4.0 * trap2 - trap) / 3.0;
        n *= 2;
        h *= 0.5;
        trap = trap2;
        if (have_prev && std::abs(simpson - simpson_prev) < 1e-10) return simpson;
        simpson_prev = simpson;
        have_prev = true;
    }
    return simpson_prev;
}

double mod_channel_capacity(const PartitionChain& chain, int level, double sigma) {
    const double v = chain.cell_volume(level);
    const double c = std::log2(v) - differential_entropy(chain, level, sigma);
    return std::max(0.0, c);
}

double partition_channel_capacity(const PartitionChain& chain, int level, double sigma) {
    check_level(chain, level);
    if (level > chain.levels - 1)
        throw std::invalid_argument("partition level must be below the chain top");
    const double c =
        mod_channel_capacity(chain, level + 1, sigma) - mod_channel_capacity(chain, level, sigma);
    return std::max(0.0, c);
}

double vnr(const PartitionChain& chain, int level, double sigma) {
    check_level(chain, level);
    check_sigma(sigma);
    const double v = chain.cell_volume(level);
    return v * v / (sigma * sigma);
}

}  // namespace polarlat
