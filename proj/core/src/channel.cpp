#include "polarlat/channel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "bms_internal.hpp"

namespace polarlat {

using detail::PairProb;

namespace {

constexpr double kSumTol = 1e-12;

void validate_pairs(const std::vector<SymbolPair>& pairs) {
    double sum0 = 0.0, sum1 = 0.0;
    for (const auto& p : pairs) {
        if (!(p.p0 >= 0.0) || !(p.p1 >= 0.0) || !std::isfinite(p.p0) || !std::isfinite(p.p1))
            throw std::invalid_argument("DiscreteBms: probabilities must be finite and >= 0");
        if (p.self_paired) {
            if (std::abs(p.p0 - p.p1) > kSumTol)
                throw std::invalid_argument("DiscreteBms: self-paired symbol needs p0 == p1");
            sum0 += p.p0;
            sum1 += p.p1;
        } else {
            sum0 += p.p0 + p.p1;
            sum1 += p.p1 + p.p0;
        }
    }
    if (std::abs(sum0 - 1.0) > kSumTol || std::abs(sum1 - 1.0) > kSumTol)
        throw std::invalid_argument("DiscreteBms: outputs must sum to one under each input");
}

// Internal representation: every entry is a plain mirrored pair; self-paired
// symbols split into two half-mass symbols (lossless for I and Z).
std::vector<PairProb> to_pairlist(const DiscreteBms& c) {
    std::vector<PairProb> out;
    out.reserve(c.pairs().size());
    for (const auto& p : c.pairs()) {
        if (p.self_paired) {
            const double m = 0.25 * (p.p0 + p.p1);
            out.push_back({m, m});
        } else {
            out.push_back(detail::canonical(p.p0, p.p1));
        }
    }
    return out;
}

DiscreteBms from_pairlist(std::vector<PairProb> ps) {
    std::sort(ps.begin(), ps.end(), [](const PairProb& x, const PairProb& y) {
        const double lx = x.b > 0.0 ? x.a / x.b : std::numeric_limits<double>::infinity();
        const double ly = y.b > 0.0 ? y.a / y.b : std::numeric_limits<double>::infinity();
        if (lx != ly) return lx < ly;
        return x.a < y.a;
    });
    std::vector<SymbolPair> pairs;
    pairs.reserve(ps.size());
    for (const auto& p : ps) pairs.push_back({p.a, p.b, false});
    return DiscreteBms(std::move(pairs));
}

}  // namespace

DiscreteBms::DiscreteBms(std::vector<SymbolPair> pairs) : pairs_(std::move(pairs)) {
    for (auto& p : pairs_)
        if (!p.self_paired && p.p1 > p.p0) std::swap(p.p0, p.p1);
    validate_pairs(pairs_);
}

std::size_t DiscreteBms::output_symbols() const {
    std::size_t n = 0;
    for (const auto& p : pairs_) n += p.self_paired ? 1 : 2;
    return n;
}

double quantization_tolerance(const QuantizerConfig& q) { return 2.0 / q.bins; }

namespace {

// Gaussian mass of [lo, hi) aliased by the lattice with cell volume v,
// optionally shifted: sum_k Phi((hi - shift - k v)/sigma) - Phi((lo - ...)).
double aliased_bin_mass(double lo, double hi, double shift, double sigma, double v) {
    const int kmax = static_cast<int>(std::ceil((10.0 * sigma + 2.0 * v) / v)) + 1;
    const double inv = 1.0 / (sigma * std::sqrt(2.0));
    double mass = 0.0;
    for (int k = -kmax; k <= kmax; ++k) {
        const double a = (lo - shift - k * v) * inv;
        const double b = (hi - shift - k * v) * inv;
        mass += 0.5 * (std::erf(b) - std::erf(a));
    }
    return std::max(mass, 0.0);
}

}  // namespace

DiscreteBms build_partition_channel(const PartitionChain& chain, int level, double sigma,
                                    const QuantizerConfig& q, MergeDirection dir) {
    if (level < 1 || level > chain.levels - 1)
        throw std::invalid_argument("build_partition_channel: level out of range");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("build_partition_channel: sigma must be positive");

    const double v = chain.cell_volume(level + 1);  // output cell and alias period
    const double s = chain.cell_volume(level);      // input-1 coset representative

    // The conditional densities are even and half-period-shift symmetric, so
    // the half cell [0, V/2) carries the whole channel: bin i pairs with bin
    // (m-1-i), and the mirrored half [-V/2, 0) duplicates every symbol.
    const std::size_t half_bins = 4 * static_cast<std::size_t>(q.bins);
    const double w = 0.5 * v / static_cast<double>(half_bins);

    std::vector<PairProb> syms;
    syms.reserve(half_bins / 2);

    if (dir == MergeDirection::degrade) {
        for (std::size_t i = 0; i < half_bins / 2; ++i) {
            const double lo = w * static_cast<double>(i);
            const double hi = lo + w;
            const double m0 = 2.0 * aliased_bin_mass(lo, hi, 0.0, sigma, v);
            const double m1 = 2.0 * aliased_bin_mass(lo, hi, s, sigma, v);
            syms.push_back(detail::canonical(m0, m1));
        }
        return from_pairlist(detail::reduce_degrade(syms, static_cast<std::size_t>(q.bins) / 2));
    }

    // Upgraded direction: within each bin the likelihood ratio is monotone in
    // z, so splitting the bin mass between its endpoint ratios moves mass
    // outward and upper-bounds the continuous channel.
    auto log_lr = [&](double z) {
        return log_aliased_gaussian_pdf(z, sigma, chain, level + 1) -
               log_aliased_gaussian_pdf(z - s, sigma, chain, level + 1);
    };
    for (std::size_t i = 0; i < half_bins / 2; ++i) {
        const double lo = w * static_cast<double>(i);
        const double hi = lo + w;
        const double m0 = 2.0 * aliased_bin_mass(lo, hi, 0.0, sigma, v);
        const double m1 = 2.0 * aliased_bin_mass(lo, hi, s, sigma, v);
        if (m0 + m1 <= 0.0) continue;
        const double lr_hi = log_lr(lo);  // LR decreases with z on [0, V/4)
        const double lr_lo = log_lr(hi);
        if (m1 <= 0.0 || lr_hi > 700.0) {
            syms.push_back({m0, m1});  // effectively noiseless bin
            continue;
        }
        const double theta_l = std::exp(lr_lo);
        const double theta_r = std::exp(lr_hi);
        double xb = theta_r > theta_l ? (theta_r * m1 - m0) / (theta_r - theta_l) : m1;
        xb = std::clamp(xb, 0.0, m1);
        const double xa = std::min(theta_l * xb, m0);
        syms.push_back(detail::canonical(xa, xb));
        syms.push_back(detail::canonical(m0 - xa, m1 - xb));
    }
    return from_pairlist(detail::reduce_upgrade(syms, static_cast<std::size_t>(q.bins) / 2));
}

DiscreteBms build_equivalent_channel(const PartitionChain& chain, int level, double sigma,
                                     const QuantizerConfig& q) {
    if (level < 1 || level > chain.levels - 1)
        throw std::invalid_argument("build_equivalent_channel: level out of range");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("build_equivalent_channel: sigma must be positive");

    const double v_top = chain.cell_volume(chain.levels);
    const double v_sub = chain.cell_volume(level + 1);
    const double s = chain.cell_volume(level);
    const int coset_count = 1 << (chain.levels - 1 - level);

    // Bin the whole top-level cell; make the count divisible by the bins per
    // alias period so periodic bins line up exactly.
    std::size_t bins = 8 * static_cast<std::size_t>(q.bins);
    const std::size_t groups = 2 * static_cast<std::size_t>(coset_count);
    bins = ((bins + groups - 1) / groups) * groups;
    const std::size_t per_period = bins / static_cast<std::size_t>(coset_count);
    const double w = v_top / static_cast<double>(bins);

    // Conditional mass of each bin: the top-lattice aliased density averaged
    // over the unknown higher-level coset shifts (the chain-rule
    // equivalent-channel density, 1/K * f_{sigma, Lambda_{i+1}} overall).
    std::vector<double> m0(bins), m1(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        const double lo = -0.5 * v_top + w * static_cast<double>(i);
        const double hi = lo + w;
        double acc0 = 0.0, acc1 = 0.0;
        for (int j = 0; j < coset_count; ++j) {
            const double shift = j * v_sub;
            acc0 += aliased_bin_mass(lo, hi, shift, sigma, v_top);
            acc1 += aliased_bin_mass(lo, hi, shift + s, sigma, v_top);
        }
        m0[i] = acc0 / coset_count;
        m1[i] = acc1 / coset_count;
    }

    // Bins one alias period apart have identical conditionals: collapse them,
    // then pair z with z + s inside one period (the symmetry involution).
    std::vector<PairProb> syms;
    syms.reserve(per_period / 2);
    for (std::size_t p = 0; p < per_period / 2; ++p) {
        double a = 0.0, b = 0.0;
        for (std::size_t t = p; t < bins; t += per_period) {
            a += m0[t];
            b += m1[t];
        }
        syms.push_back(detail::canonical(a, b));
    }
    return from_pairlist(detail::reduce_degrade(syms, static_cast<std::size_t>(q.bins) / 2));
}

DiscreteBms degrading_merge(const DiscreteBms& c, const QuantizerConfig& q) {
    if (c.output_symbols() <= static_cast<std::size_t>(q.bins)) return c;
    return from_pairlist(detail::reduce_degrade(to_pairlist(c), static_cast<std::size_t>(q.bins) / 2));
}

DiscreteBms upgrading_merge(const DiscreteBms& c, const QuantizerConfig& q) {
    if (c.output_symbols() <= static_cast<std::size_t>(q.bins)) return c;
    return from_pairlist(detail::reduce_upgrade(to_pairlist(c), static_cast<std::size_t>(q.bins) / 2));
}

double channel_mi(const DiscreteBms& c) {
    validate_pairs(c.pairs());
    double acc = 0.0;
    for (const auto& p : c.pairs()) {
        if (p.self_paired) continue;  // equal likelihoods contribute nothing
        acc += detail::pair_mi_term(p.p0, p.p1);
    }
    return std::clamp(acc, 0.0, 1.0);
}

double channel_bhattacharyya(const DiscreteBms& c) {
    validate_pairs(c.pairs());
    double acc = 0.0;
    for (const auto& p : c.pairs()) {
        if (p.self_paired)
            acc += std::sqrt(p.p0 * p.p1);
        else
            acc += 2.0 * std::sqrt(p.p0 * p.p1);
    }
    return std::clamp(acc, 0.0, 1.0);
}

std::string bms_to_json(const DiscreteBms& c) {
    nlohmann::json doc;
    doc["format"] = "polarlat-bms";
    doc["version"] = 1;
    auto& arr = doc["pairs"];
    arr = nlohmann::json::array();
    for (const auto& p : c.pairs()) arr.push_back({p.p0, p.p1, p.self_paired});
    return doc.dump();
}

DiscreteBms bms_from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    if (doc.value("format", "") != "polarlat-bms")
        throw std::invalid_argument("bms_from_json: unexpected document format");
    std::vector<SymbolPair> pairs;
    for (const auto& row : doc.at("pairs"))
        pairs.push_back({row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<bool>()});
    return DiscreteBms(std::move(pairs));
}

void bms_write_csv(const DiscreteBms& c, std::ostream& os) {
    os << "p0,p1,self_paired\n";
    os << std::setprecision(17);
    for (const auto& p : c.pairs())
        os << p.p0 << ',' << p.p1 << ',' << (p.self_paired ? 1 : 0) << '\n';
}

}  // namespace polarlat
