#include "polarlat/sim.hpp"

#include <algorithm>
#include <cmath>

namespace polarlat {

namespace {

void wilson_interval(FerReport& rep) {
    if (rep.trials <= 0) return;
    const double z = 1.959963984540054;  // 95%
    const double n = static_cast<double>(rep.trials);
    const double p = static_cast<double>(rep.errors) / n;
    const double denom = 1.0 + z * z / n;
    const double center = p + z * z / (2.0 * n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
    rep.fer = p;
    rep.wilson_low = rep.errors == 0 ? 0.0 : std::max(0.0, (center - half) / denom);
    rep.wilson_high = rep.errors == rep.trials ? 1.0 : std::min(1.0, (center + half) / denom);
}

std::vector<double> transmit(const Frame& frame, double sigma, const PartitionChain& chain,
                             CounterRng& rng) {
    std::vector<double> z(frame.symbols.size());
    for (std::size_t j = 0; j < z.size(); ++j)
        z[j] = mod_lattice(frame.symbols[j] + sigma * rng.next_normal(), chain, chain.levels);
    return z;
}

}  // namespace

FerReport simulate_bob(const SecrecyCodeSpec& spec, const ExperimentConfig& cfg) {
    FerReport rep;
    rep.trials = cfg.trials;
    rep.level_errors.assign(spec.plans.size(), 0);
    const PartitionChain chain = spec.chain();
    const CounterRng base(cfg.seed);

    if (cfg.blocks <= 1) {
        std::size_t msg_len = 0;
        for (const auto& plan : spec.plans) msg_len += plan.part.a.size();
        for (long t = 0; t < cfg.trials; ++t) {
            CounterRng rng = base.stream(static_cast<std::uint64_t>(t));
            std::vector<std::uint8_t> msg(msg_len);
            for (auto& b : msg) b = rng.next_bit();
            const auto enc = encode(msg, rng, spec);
            const auto z = transmit(enc.frame, spec.sigma_b, chain, rng);
            const auto dec = multistage_decode(z, spec);
            if (dec.message_bits != msg) ++rep.errors;
            for (std::size_t l = 0; l < spec.plans.size(); ++l)
                if (dec.level_u[l] != enc.level_u[l]) ++rep.level_errors[l];
        }
    } else {
        SecrecyCodeSpec chained = spec;
        chained.blocks_per_level = cfg.blocks;
        const auto layout = chain_layout(chained);
        const int k = cfg.blocks;
        for (long t = 0; t < cfg.trials; ++t) {
            CounterRng rng = base.stream(static_cast<std::uint64_t>(t));
            std::vector<std::vector<std::uint8_t>> messages(static_cast<std::size_t>(k));
            for (auto& m : messages) {
                m.resize(static_cast<std::size_t>(layout.message_bits_per_block));
                for (auto& b : m) b = rng.next_bit();
            }
            const auto frames = chain_encode_sequence(messages, rng, chained);
            std::vector<std::vector<double>> obs;
            obs.reserve(frames.size());
            for (const auto& f : frames) obs.push_back(transmit(f, spec.sigma_b, chain, rng));
            const auto decoded = chain_decode_sequence(obs, chained);
            if (decoded != messages) ++rep.errors;
        }
    }
    wilson_interval(rep);
    return rep;
}

std::vector<RateTableRow> rate_table(const std::vector<RateGridPoint>& grid) {
    std::vector<RateTableRow> rows;
    rows.reserve(grid.size());
    const double ln2 = std::log(2.0);
    for (const auto& pt : grid) {
        if (!(pt.sigma_b > 0.0) || !(pt.sigma_e >= pt.sigma_b))
            throw std::invalid_argument("rate_table: need 0 < sigma_b <= sigma_e");
        const PartitionChain chain(pt.alpha, pt.levels);
        RateTableRow row;
        row.point = pt;
        double rate = 0.0;
        for (int level = 1; level <= pt.levels - 1; ++level) {
            row.c_v.push_back(partition_channel_capacity(chain, level, pt.sigma_b));
            row.c_w.push_back(partition_channel_capacity(chain, level, pt.sigma_e));
            rate += row.c_v.back() - row.c_w.back();
        }
        row.rate_bits = rate;
        row.bound_bits = std::log2(pt.sigma_e / pt.sigma_b);
        row.gap_bits = row.bound_bits - row.rate_bits;
        row.rate_nats = rate * ln2;
        row.bound_nats = row.bound_bits * ln2;
        row.gap_nats = row.gap_bits * ln2;
        row.eps1_bits = differential_entropy(chain, 1, pt.sigma_e) -
                        differential_entropy(chain, 1, pt.sigma_b);
        const double half_log_2pie = 0.5 * std::log2(2.0 * M_PI * M_E);
        row.eps_b_bits = half_log_2pie + std::log2(pt.sigma_b) -
                         differential_entropy(chain, pt.levels, pt.sigma_b);
        row.eps_e_bits = half_log_2pie + std::log2(pt.sigma_e) -
                         differential_entropy(chain, pt.levels, pt.sigma_e);
        rows.push_back(std::move(row));
    }
    return rows;
}

double exact_leakage_small(const SecrecyCodeSpec& spec) {
    if (spec.levels != 2)
        throw std::domain_error("exact_leakage_small: only r = 2 instances are enumerable");
    const int n = spec.block_length();
    if (n > 4) throw std::domain_error("exact_leakage_small: block length above 4 refused");

    const PartitionChain chain = spec.chain();
    const auto eve = build_partition_channel(chain, 1, spec.sigma_e, QuantizerConfig(spec.mu),
                                             MergeDirection::degrade);

    // Expand the symmetrized channel into the explicit output alphabet.
    std::vector<std::pair<double, double>> w;  // (P(y|0), P(y|1))
    for (const auto& p : eve.pairs()) {
        w.emplace_back(p.p0, p.p1);
        if (!p.self_paired) w.emplace_back(p.p1, p.p0);
    }
    const std::size_t alphabet = w.size();
    double outcomes = 1.0;
    for (int j = 0; j < n; ++j) outcomes *= static_cast<double>(alphabet);
    if (outcomes > 4096.0)
        throw std::domain_error("exact_leakage_small: joint output space above 2^12 refused");
    const std::size_t total_z = static_cast<std::size_t>(outcomes);

    const auto& part = spec.plans.at(0).part;
    const auto& a = part.a;
    std::vector<int> randoms(part.b);
    randoms.insert(randoms.end(), part.d.begin(), part.d.end());
    if (a.empty()) return 0.0;

    const std::size_t n_msg = std::size_t{1} << a.size();
    const std::size_t n_rnd = std::size_t{1} << randoms.size();

    std::vector<std::vector<double>> pz(n_msg, std::vector<double>(total_z, 0.0));
    for (std::size_t m = 0; m < n_msg; ++m) {
        for (std::size_t r = 0; r < n_rnd; ++r) {
            std::vector<std::uint8_t> u(static_cast<std::size_t>(n), 0);
            for (std::size_t i = 0; i < a.size(); ++i)
                u[static_cast<std::size_t>(a[i])] = static_cast<std::uint8_t>((m >> i) & 1);
            for (std::size_t i = 0; i < randoms.size(); ++i)
                u[static_cast<std::size_t>(randoms[i])] = static_cast<std::uint8_t>((r >> i) & 1);
            const auto x = polar_transform(u);
            // joint likelihood over the mixed-radix output tuple
            for (std::size_t zi = 0; zi < total_z; ++zi) {
                std::size_t digits = zi;
                double prob = 1.0;
                for (int j = 0; j < n; ++j) {
                    const auto& sym = w[digits % alphabet];
                    digits /= alphabet;
                    prob *= x[static_cast<std::size_t>(j)] ? sym.second : sym.first;
                }
                pz[m][zi] += prob / static_cast<double>(n_rnd);
            }
        }
    }

    std::vector<double> mix(total_z, 0.0);
    for (const auto& row : pz)
        for (std::size_t zi = 0; zi < total_z; ++zi) mix[zi] += row[zi] / static_cast<double>(n_msg);

    double bits = 0.0;
    for (const auto& row : pz)
        for (std::size_t zi = 0; zi < total_z; ++zi)
            if (row[zi] > 0.0 && mix[zi] > 0.0)
                bits += row[zi] * std::log2(row[zi] / mix[zi]) / static_cast<double>(n_msg);
    return std::max(0.0, bits);
}

std::vector<LeakageRow> leakage_scaling_report(const std::vector<SecrecyCodeSpec>& specs) {
    std::vector<LeakageRow> rows;
    rows.reserve(specs.size());
    for (const auto& spec : specs) {
        LeakageRow row;
        row.block_length = spec.block_length();
        row.bound = leakage_bound(spec);
        const double n = static_cast<double>(row.block_length);
        row.envelope = static_cast<double>(spec.levels) * n * std::exp2(-std::pow(n, spec.beta));
        if (row.bound > row.envelope + 1e-9)
            throw std::logic_error("leakage_scaling_report: constructive bound exceeds the envelope");
        rows.push_back(row);
    }
    return rows;
}

std::vector<LeakageRow> leakage_scaling_report(const PartitionChain& chain, const NoiseModel& noise,
                                               double beta, const std::vector<int>& n_exps,
                                               const QuantizerConfig& q, int blocks_per_level) {
    std::vector<SecrecyCodeSpec> specs;
    specs.reserve(n_exps.size());
    for (int n_exp : n_exps)
        specs.push_back(build_spec(chain, noise, n_exp, beta, q, blocks_per_level));
    return leakage_scaling_report(specs);
}

}  // namespace polarlat
