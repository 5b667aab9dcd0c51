#include "polarlat/codec.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace polarlat {

namespace {

double boxplus(double a, double b) {
    const double sgn = ((a < 0.0) != (b < 0.0)) ? -1.0 : 1.0;
    const double m = std::min(std::abs(a), std::abs(b));
    return sgn * m + std::log1p(std::exp(-std::abs(a + b))) -
           std::log1p(std::exp(-std::abs(a - b)));
}

// Recursive SC pass. llr is scratch of length n; decisions land in u at
// offset; the return value is this subtree's codeword, needed for the g-step.
std::vector<std::uint8_t> sc_recurse(double* llr, int n, int offset, const KnownBits& known,
                                     std::vector<std::uint8_t>& u) {
    if (n == 1) {
        std::uint8_t bit;
        const std::int8_t k = known[static_cast<std::size_t>(offset)];
        if (k >= 0)
            bit = static_cast<std::uint8_t>(k);
        else
            bit = llr[0] >= 0.0 ? 0 : 1;  // ties decide 0
        u[static_cast<std::size_t>(offset)] = bit;
        return {bit};
    }
    const int h = n / 2;
    std::vector<double> child(static_cast<std::size_t>(h));
    for (int j = 0; j < h; ++j) child[static_cast<std::size_t>(j)] = boxplus(llr[j], llr[j + h]);
    auto xl = sc_recurse(child.data(), h, offset, known, u);
    for (int j = 0; j < h; ++j)
        child[static_cast<std::size_t>(j)] = llr[j + h] + (xl[static_cast<std::size_t>(j)] ? -llr[j] : llr[j]);
    auto xr = sc_recurse(child.data(), h, offset + h, known, u);
    std::vector<std::uint8_t> x(static_cast<std::size_t>(n));
    for (int j = 0; j < h; ++j) {
        x[static_cast<std::size_t>(j)] =
            static_cast<std::uint8_t>(xl[static_cast<std::size_t>(j)] ^ xr[static_cast<std::size_t>(j)]);
        x[static_cast<std::size_t>(j + h)] = xr[static_cast<std::size_t>(j)];
    }
    return x;
}

}  // namespace

std::vector<std::uint8_t> polar_transform(std::vector<std::uint8_t> u) {
    const std::size_t n = u.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("polar_transform: length must be a power of two");
    for (std::size_t len = 1; len < n; len <<= 1)
        for (std::size_t i = 0; i < n; i += 2 * len)
            for (std::size_t j = i; j < i + len; ++j) u[j] ^= u[j + len];
    return u;
}

KnownBits default_known(const SecrecyCodeSpec& spec, int level, std::uint8_t frozen_value) {
    const int n = spec.block_length();
    const auto& plan = spec.plans.at(static_cast<std::size_t>(level - 1));
    KnownBits known(static_cast<std::size_t>(n), -1);
    for (int i : plan.part.c) known[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(frozen_value);
    return known;
}

EncodeResult encode(const std::vector<std::uint8_t>& message_bits, CounterRng& rng,
                    const SecrecyCodeSpec& spec, std::uint8_t frozen_value) {
    const int n = spec.block_length();
    std::size_t need = 0;
    for (const auto& plan : spec.plans) need += plan.part.a.size();
    if (message_bits.size() != need)
        throw std::invalid_argument("encode: wrong message length for this spec");

    EncodeResult out;
    out.level_u.reserve(spec.plans.size());
    out.level_codeword.reserve(spec.plans.size());

    std::size_t msg_pos = 0;
    std::vector<long> total(static_cast<std::size_t>(n), 0);
    for (const auto& plan : spec.plans) {
        const auto roles = assign_roles(plan.part, n);
        std::vector<std::uint8_t> u(static_cast<std::size_t>(n), frozen_value);
        for (int i = 0; i < n; ++i) {
            switch (roles[static_cast<std::size_t>(i)]) {
                case BitRole::message: u[static_cast<std::size_t>(i)] = message_bits[msg_pos++]; break;
                case BitRole::random: u[static_cast<std::size_t>(i)] = rng.next_bit(); break;
                case BitRole::frozen: break;
            }
        }
        auto x = polar_transform(u);
        for (int j = 0; j < n; ++j)
            total[static_cast<std::size_t>(j)] +=
                static_cast<long>(x[static_cast<std::size_t>(j)]) << (plan.level - 1);
        out.level_u.push_back(std::move(u));
        out.level_codeword.push_back(std::move(x));
    }

    const PartitionChain chain = spec.chain();
    out.frame.symbols.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        out.frame.symbols[static_cast<std::size_t>(j)] =
            mod_lattice(chain.alpha * static_cast<double>(total[static_cast<std::size_t>(j)]), chain,
                        chain.levels);
    return out;
}

std::vector<std::uint8_t> sc_decode_level(const std::vector<double>& observations, int level,
                                          const SecrecyCodeSpec& spec,
                                          const std::vector<std::vector<std::uint8_t>>& lower_codewords,
                                          const KnownBits& known) {
    const int n = spec.block_length();
    if (static_cast<int>(observations.size()) != n)
        throw std::invalid_argument("sc_decode_level: observation length mismatch");
    if (level < 1 || level > spec.levels - 1)
        throw std::invalid_argument("sc_decode_level: level out of range");
    if (static_cast<int>(lower_codewords.size()) < level - 1)
        throw std::invalid_argument("sc_decode_level: missing lower-level decisions");

    const PartitionChain chain = spec.chain();
    const double step = chain.cell_volume(level);  // coset representative of input 1

    std::vector<double> llr(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double low = 0.0;
        for (int m = 1; m < level; ++m)
            low += chain.cell_volume(m) *
                   static_cast<double>(lower_codewords[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(j)]);
        const double z = observations[static_cast<std::size_t>(j)] - low;
        llr[static_cast<std::size_t>(j)] =
            log_aliased_gaussian_pdf(z, spec.sigma_b, chain, level + 1) -
            log_aliased_gaussian_pdf(z - step, spec.sigma_b, chain, level + 1);
    }

    std::vector<std::uint8_t> u(static_cast<std::size_t>(n), 0);
    sc_recurse(llr.data(), n, 0, known, u);
    return u;
}

DecodeResult multistage_decode(const std::vector<double>& observation, const SecrecyCodeSpec& spec,
                               const std::vector<KnownBits>* known_per_level) {
    DecodeResult out;
    for (int level = 1; level <= spec.levels - 1; ++level) {
        const KnownBits known = known_per_level
                                    ? known_per_level->at(static_cast<std::size_t>(level - 1))
                                    : default_known(spec, level);
        auto u = sc_decode_level(observation, level, spec, out.level_codeword, known);
        out.level_codeword.push_back(polar_transform(u));
        out.level_u.push_back(std::move(u));
    }
    for (const auto& plan : spec.plans)
        for (int i : plan.part.a)
            out.message_bits.push_back(
                out.level_u[static_cast<std::size_t>(plan.level - 1)][static_cast<std::size_t>(i)]);
    return out;
}

ChainLayout chain_layout(const SecrecyCodeSpec& spec) {
    ChainLayout layout;
    int total = 0;
    for (const auto& plan : spec.plans) {
        const auto& a = plan.part.a;
        const auto& d = plan.part.d;
        if (d.size() > a.size())
            throw construction_error("chain_layout: message set too small to ferry d-bits");
        layout.reserved.emplace_back(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(d.size()));
        layout.message_slots.emplace_back(a.begin() + static_cast<std::ptrdiff_t>(d.size()), a.end());
        std::vector<int> info(plan.part.a);
        info.insert(info.end(), plan.part.b.begin(), plan.part.b.end());
        std::sort(info.begin(), info.end());
        if (d.size() > info.size())
            throw construction_error("chain_layout: seed block cannot carry the initial d-bits");
        layout.seed_info.push_back(std::move(info));
        total += static_cast<int>(a.size() - d.size());
    }
    layout.message_bits_per_block = total;
    return layout;
}

void audit_chain_placement(const SecrecyCodeSpec& spec) {
    const auto layout = chain_layout(spec);
    const int n = spec.block_length();
    for (std::size_t l = 0; l < spec.plans.size(); ++l) {
        const auto& plan = spec.plans[l];
        (void)assign_roles(plan.part, n);  // throws unless a/b/c/d partition [0,N)
        std::vector<bool> in_a(static_cast<std::size_t>(n), false);
        for (int i : plan.part.a) in_a[static_cast<std::size_t>(i)] = true;
        for (int i : layout.reserved[l])
            if (!in_a[static_cast<std::size_t>(i)])
                throw construction_error("audit_chain_placement: chained d-bit outside the secure set");
        if (layout.reserved[l].size() != plan.part.d.size())
            throw construction_error("audit_chain_placement: reserved slot count mismatch");
        std::vector<bool> reliable(static_cast<std::size_t>(n), false);
        for (int i : plan.part.a) reliable[static_cast<std::size_t>(i)] = true;
        for (int i : plan.part.b) reliable[static_cast<std::size_t>(i)] = true;
        for (int i : layout.seed_info[l])
            if (!reliable[static_cast<std::size_t>(i)])
                throw construction_error("audit_chain_placement: seed info outside the reliable set");
    }
}

namespace {

Frame assemble_frame(const SecrecyCodeSpec& spec,
                     const std::vector<std::vector<std::uint8_t>>& level_u) {
    const int n = spec.block_length();
    const PartitionChain chain = spec.chain();
    std::vector<long> total(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<std::uint8_t>> codewords;
    for (std::size_t l = 0; l < level_u.size(); ++l) {
        auto x = polar_transform(level_u[l]);
        for (int j = 0; j < n; ++j)
            total[static_cast<std::size_t>(j)] += static_cast<long>(x[static_cast<std::size_t>(j)]) << l;
        codewords.push_back(std::move(x));
    }
    Frame frame;
    frame.symbols.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        frame.symbols[static_cast<std::size_t>(j)] =
            mod_lattice(chain.alpha * static_cast<double>(total[static_cast<std::size_t>(j)]), chain,
                        chain.levels);
    return frame;
}

}  // namespace

std::vector<Frame> chain_encode_sequence(const std::vector<std::vector<std::uint8_t>>& messages,
                                         CounterRng& rng, const SecrecyCodeSpec& spec) {
    const auto layout = chain_layout(spec);
    const int k = spec.blocks_per_level;
    const int n = spec.block_length();
    if (static_cast<int>(messages.size()) != k)
        throw std::invalid_argument("chain_encode_sequence: expected blocks_per_level messages");
    for (const auto& m : messages)
        if (static_cast<int>(m.size()) != layout.message_bits_per_block)
            throw std::invalid_argument("chain_encode_sequence: wrong per-block message length");

    // All chained d-values are plain random bits, drawn up front so block t
    // can embed block t+1's values.
    std::vector<std::vector<std::vector<std::uint8_t>>> d_vals(static_cast<std::size_t>(k + 1));
    for (int t = 1; t <= k; ++t) {
        d_vals[static_cast<std::size_t>(t)].resize(spec.plans.size());
        for (std::size_t l = 0; l < spec.plans.size(); ++l) {
            auto& v = d_vals[static_cast<std::size_t>(t)][l];
            v.resize(spec.plans[l].part.d.size());
            for (auto& bit : v) bit = rng.next_bit();
        }
    }

    std::vector<Frame> frames;
    frames.reserve(static_cast<std::size_t>(k) + 1);

    // Seed block: reliable positions only; first |d_i| of them carry block 1's
    // d-values, the rest are random; everything else frozen to zero.
    {
        std::vector<std::vector<std::uint8_t>> level_u;
        for (std::size_t l = 0; l < spec.plans.size(); ++l) {
            std::vector<std::uint8_t> u(static_cast<std::size_t>(n), 0);
            const auto& info = layout.seed_info[l];
            const std::size_t carry = d_vals[1][l].size();
            for (std::size_t s = 0; s < info.size(); ++s)
                u[static_cast<std::size_t>(info[s])] =
                    s < carry ? d_vals[1][l][s] : rng.next_bit();
            level_u.push_back(std::move(u));
        }
        frames.push_back(assemble_frame(spec, level_u));
    }

    for (int t = 1; t <= k; ++t) {
        std::vector<std::vector<std::uint8_t>> level_u;
        std::size_t msg_pos = 0;
        for (std::size_t l = 0; l < spec.plans.size(); ++l) {
            const auto& plan = spec.plans[l];
            std::vector<std::uint8_t> u(static_cast<std::size_t>(n), 0);
            for (std::size_t s = 0; s < layout.reserved[l].size(); ++s)
                u[static_cast<std::size_t>(layout.reserved[l][s])] =
                    t < k ? d_vals[static_cast<std::size_t>(t) + 1][l][s] : rng.next_bit();
            for (int idx : layout.message_slots[l])
                u[static_cast<std::size_t>(idx)] = messages[static_cast<std::size_t>(t - 1)][msg_pos++];
            for (int idx : plan.part.b) u[static_cast<std::size_t>(idx)] = rng.next_bit();
            for (std::size_t s = 0; s < plan.part.d.size(); ++s)
                u[static_cast<std::size_t>(plan.part.d[s])] = d_vals[static_cast<std::size_t>(t)][l][s];
            level_u.push_back(std::move(u));
        }
        frames.push_back(assemble_frame(spec, level_u));
    }
    return frames;
}

std::vector<std::vector<std::uint8_t>> chain_decode_sequence(
    const std::vector<std::vector<double>>& observations, const SecrecyCodeSpec& spec) {
    const auto layout = chain_layout(spec);
    const int k = spec.blocks_per_level;
    if (static_cast<int>(observations.size()) != k + 1)
        throw std::invalid_argument("chain_decode_sequence: expected blocks_per_level + 1 blocks");

    const int n = spec.block_length();
    std::vector<std::vector<std::uint8_t>> next_d(spec.plans.size());

    // Seed block: information set is a-union-b, everything else frozen.
    {
        std::vector<KnownBits> known;
        for (std::size_t l = 0; l < spec.plans.size(); ++l) {
            KnownBits kb(static_cast<std::size_t>(n), 0);
            for (int i : layout.seed_info[l]) kb[static_cast<std::size_t>(i)] = -1;
            known.push_back(std::move(kb));
        }
        const auto dec = multistage_decode(observations[0], spec, &known);
        for (std::size_t l = 0; l < spec.plans.size(); ++l) {
            const std::size_t carry = spec.plans[l].part.d.size();
            next_d[l].resize(carry);
            for (std::size_t s = 0; s < carry; ++s)
                next_d[l][s] = dec.level_u[l][static_cast<std::size_t>(layout.seed_info[l][s])];
        }
    }

    std::vector<std::vector<std::uint8_t>> messages;
    messages.reserve(static_cast<std::size_t>(k));
    for (int t = 1; t <= k; ++t) {
        std::vector<KnownBits> known;
        for (std::size_t l = 0; l < spec.plans.size(); ++l) {
            KnownBits kb = default_known(spec, static_cast<int>(l) + 1);
            const auto& d = spec.plans[l].part.d;
            for (std::size_t s = 0; s < d.size(); ++s)
                kb[static_cast<std::size_t>(d[s])] = static_cast<std::int8_t>(next_d[l][s]);
            known.push_back(std::move(kb));
        }
        const auto dec = multistage_decode(observations[static_cast<std::size_t>(t)], spec, &known);
        std::vector<std::uint8_t> msg;
        msg.reserve(static_cast<std::size_t>(layout.message_bits_per_block));
        for (std::size_t l = 0; l < spec.plans.size(); ++l)
            for (int idx : layout.message_slots[l])
                msg.push_back(dec.level_u[l][static_cast<std::size_t>(idx)]);
        messages.push_back(std::move(msg));
        if (t < k) {
            for (std::size_t l = 0; l < spec.plans.size(); ++l) {
                const auto& res = layout.reserved[l];
                for (std::size_t s = 0; s < res.size(); ++s)
                    next_d[l][s] = dec.level_u[l][static_cast<std::size_t>(res[s])];
            }
        }
    }
    return messages;
}

bool frame_on_grid(const Frame& frame, const PartitionChain& chain, double tol) {
    const double v = chain.cell_volume(chain.levels);
    for (double x : frame.symbols) {
        const double q = std::round(x / chain.alpha);
        if (std::abs(x - chain.alpha * q) > tol) return false;
        if (x < -0.5 * v - tol || x >= 0.5 * v) return false;
    }
    return true;
}

void frames_write_csv(const std::vector<Frame>& frames, std::ostream& os) {
    os << std::setprecision(17);
    for (const auto& f : frames) {
        for (std::size_t j = 0; j < f.symbols.size(); ++j)
            os << (j ? "," : "") << f.symbols[j];
        os << '\n';
    }
}

std::vector<Frame> frames_read_csv(std::istream& is) {
    std::vector<Frame> frames;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        Frame f;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) f.symbols.push_back(std::stod(cell));
        frames.push_back(std::move(f));
    }
    return frames;
}

std::string bits_to_hex(const std::vector<std::uint8_t>& bits) {
    static const char* digits = "0123456789abcdef";
    std::string hex;
    hex.reserve((bits.size() + 3) / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        int nibble = 0;
        for (std::size_t b = 0; b < 4; ++b)
            if (i + b < bits.size() && bits[i + b]) nibble |= 8 >> b;
        hex.push_back(digits[nibble]);
    }
    return hex;
}

std::vector<std::uint8_t> bits_from_hex(const std::string& hex, std::size_t n_bits) {
    if (hex.size() * 4 < n_bits)
        throw std::invalid_argument("bits_from_hex: string too short for requested bits");
    std::vector<std::uint8_t> bits(n_bits);
    for (std::size_t i = 0; i < n_bits; ++i) {
        const char c = hex[i / 4];
        int nibble;
        if (c >= '0' && c <= '9')
            nibble = c - '0';
        else if (c >= 'a' && c <= 'f')
            nibble = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            nibble = c - 'A' + 10;
        else
            throw std::invalid_argument("bits_from_hex: not a hex digit");
        bits[i] = static_cast<std::uint8_t>((nibble >> (3 - i % 4)) & 1);
    }
    return bits;
}

}  // namespace polarlat
