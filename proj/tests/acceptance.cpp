// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Heavy artifacts (the constructed specs) are shared between criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "polarlat/sim.hpp"

using namespace polarlat;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int criterion, bool ok, const char* what, double secs, double budget) {
    const bool in_budget = secs < budget;
    if (!ok || !in_budget) ++g_failures;
    std::printf("[%s] criterion %d: %s (%.1fs / budget %.0fs)\n",
                ok && in_budget ? "PASS" : "FAIL", criterion, what, secs, budget);
    std::fflush(stdout);
}

struct SharedRuns {
    std::vector<SecrecyCodeSpec> specs;  // N = 2^8, 2^10, 2^12
};

// 1. The headline figure: bound minus achievable rate is about 0.05 in at
// least one logarithm base for sigma_e^2 = 4, sigma_b^2 = 1, r = 3, alpha 2.5.
void criterion1() {
    const auto t0 = Clock::now();
    const auto rows = rate_table({{2.5, 3, 1.0, 2.0}});
    const double gap_bits = rows[0].gap_bits;
    const double gap_nats = rows[0].gap_nats;
    const bool ok = std::abs(gap_bits - 0.05) <= 0.01 || std::abs(gap_nats - 0.05) <= 0.01;
    std::printf("    gap: %.6f bits, %.6f nats\n", gap_bits, gap_nats);
    report(1, ok, "rate gap reproduces 0.05 in at least one base", seconds_since(t0), 10.0);
}

// 2. Capacity telescoping over a 20-point (alpha, sigma) grid.
void criterion2() {
    const auto t0 = Clock::now();
    bool ok = true;
    double worst = 0.0;
    for (double alpha : {0.6, 1.0, 1.7, 2.5, 3.4}) {
        for (double sigma : {0.4, 0.9, 1.6, 2.8}) {
            const PartitionChain chain(alpha, 3);
            double sum = 0.0;
            for (int level = 1; level <= 2; ++level)
                sum += partition_channel_capacity(chain, level, sigma);
            const double direct =
                mod_channel_capacity(chain, 3, sigma) - mod_channel_capacity(chain, 1, sigma);
            worst = std::max(worst, std::abs(sum - direct));
            ok = ok && std::abs(sum - direct) <= 1e-8;
        }
    }
    std::printf("    worst telescoping residual: %.3g\n", worst);
    report(2, ok, "capacity telescoping on the 20-point grid", seconds_since(t0), 30.0);
}

// 3. Polarized bit-channel figures agree between the two channel routes at N = 2^4.
void criterion3() {
    const auto t0 = Clock::now();
    const PartitionChain chain(2.5, 3);
    const QuantizerConfig q(1024);
    const int n_exp = 4;
    const double tol = 2.0 * n_exp * quantization_tolerance(q);
    bool ok = true;
    double worst = 0.0;
    for (double sigma : {1.0, 2.0}) {
        for (int level : {1, 2}) {
            const auto a = polarize(build_partition_channel(chain, level, sigma, q), n_exp, q);
            const auto b = polarize(build_equivalent_channel(chain, level, sigma, q), n_exp, q);
            for (std::size_t i = 0; i < a.size(); ++i) {
                worst = std::max({worst, std::abs(a[i].mi - b[i].mi),
                                  std::abs(a[i].bhatt - b[i].bhatt)});
                ok = ok && std::abs(a[i].mi - b[i].mi) <= tol &&
                     std::abs(a[i].bhatt - b[i].bhatt) <= tol;
            }
        }
    }
    std::printf("    worst |delta| %.3g against tolerance %.3g\n", worst, tol);
    report(3, ok, "partition and equivalent channels polarize alike", seconds_since(t0), 120.0);
}

// 4. Secrecy-rate convergence: nondecreasing in N, below the half-log bound.
void criterion4(SharedRuns& shared) {
    const auto t0 = Clock::now();
    const PartitionChain chain(2.5, 3);
    const NoiseModel noise(1.0, 2.0);
    const QuantizerConfig q(256);
    bool ok = true;
    double prev = -1.0;
    double prev_d = 2.0;
    for (int n_exp : {8, 10, 12}) {
        shared.specs.push_back(build_spec(chain, noise, n_exp, 0.3, q, 8));
        const auto& spec = shared.specs.back();
        const double rate = secrecy_rate(spec);
        std::size_t d_total = 0;
        for (const auto& plan : spec.plans) d_total += plan.part.d.size();
        const double d_frac = static_cast<double>(d_total) / spec.block_length();
        std::printf("    N=%d rate %.6f bits, |d|/N %.6f\n", spec.block_length(), rate, d_frac);
        ok = ok && rate >= prev && rate <= 0.5 * std::log2(4.0) + 1e-6;
        ok = ok && d_frac <= prev_d + 0.02;  // trend toward zero
        prev = rate;
        prev_d = d_frac;
    }
    report(4, ok, "secrecy rate grows with N under the bound", seconds_since(t0), 600.0);
}

// 5. Leakage envelope and the exact-vs-bound check on enumerable instances.
void criterion5(const SharedRuns& shared) {
    const auto t0 = Clock::now();
    bool ok = true;
    double prev = 1e300;
    try {
        const auto rows = leakage_scaling_report(shared.specs);
        for (const auto& row : rows) {
            std::printf("    N=%d bound %.6g envelope %.6g\n", row.block_length, row.bound,
                        row.envelope);
            ok = ok && row.bound <= row.envelope + 1e-9 && row.bound < prev;
            prev = row.bound;
        }
    } catch (const std::exception&) {
        ok = false;
    }

    CounterRng rng(20240809);
    int feasible = 0;
    for (int inst = 0; inst < 50; ++inst) {
        const double alpha = 0.5 + 3.0 * rng.next_unit();
        const double sigma_b = 0.3 + 1.2 * rng.next_unit();
        const double sigma_e = sigma_b * (1.3 + 1.7 * rng.next_unit());
        const double beta = 0.15 + 0.3 * rng.next_unit();
        const int n_exp = 1 + static_cast<int>(rng.next_u64() % 2);
        const int mu = n_exp == 2 ? 8 : 8 << (rng.next_u64() % 3);
        try {
            const auto spec = build_spec(PartitionChain(alpha, 2), NoiseModel(sigma_b, sigma_e),
                                         n_exp, beta, QuantizerConfig(mu), 1);
            const double exact = exact_leakage_small(spec);
            const double bound = leakage_bound(spec);
            ok = ok && exact <= bound + 1e-9;
            ++feasible;
        } catch (const std::domain_error&) {
            // oversized joint space for this draw; not a failure of the bound
        }
    }
    std::printf("    exact <= bound on %d random enumerable instances\n", feasible);
    ok = ok && feasible >= 40;
    report(5, ok, "leakage bound under the analytic envelope, above exact leakage",
           seconds_since(t0), 300.0);
}

// 6. Reliability: seeded FER strictly decreasing in N; chained sequences obey
// the union-style bound against the single-block rate.
void criterion6(const SharedRuns& shared) {
    const auto t0 = Clock::now();
    bool ok = true;
    long prev = 1L << 40;
    std::vector<FerReport> reps;
    for (const auto& spec : shared.specs) {
        const auto rep = simulate_bob(spec, ExperimentConfig(10000, 42));
        reps.push_back(rep);
        std::printf("    N=%d FER %.5f (%ld/%ld)\n", spec.block_length(), rep.fer, rep.errors,
                    rep.trials);
        ok = ok && rep.errors < prev;
        prev = rep.errors;
    }

    const int k = 8;
    const auto& base = shared.specs.front();  // N = 2^8
    const auto chained = simulate_bob(base, ExperimentConfig(2000, 42, k));
    const auto& single = reps.front();
    const double se_single = std::sqrt(single.fer * (1.0 - single.fer) /
                                       static_cast<double>(single.trials));
    const double se_chain = std::sqrt(chained.fer * (1.0 - chained.fer) /
                                      static_cast<double>(chained.trials));
    const double limit =
        (k + 1) * single.fer + 3.0 * (se_chain + (k + 1) * se_single);
    std::printf("    chained FER %.5f vs limit %.5f (single %.5f)\n", chained.fer, limit,
                single.fer);
    ok = ok && chained.fer <= limit;
    report(6, ok, "frame errors fall with N; chaining bounded by the union rule",
           seconds_since(t0), 1800.0);
}

// 7. Property sweep: the invariants the other suites rely on.
void criterion7() {
    const auto t0 = Clock::now();
    bool ok = true;
    const PartitionChain chain(2.5, 3);

    {  // aliased-density normalization at 1e-9
        for (int level = 1; level <= 3 && ok; ++level) {
            const double v = chain.cell_volume(level);
            const long pts = 40001;
            const double h = v / static_cast<double>(pts - 1);
            double mass = 0.0;
            for (long i = 0; i < pts; ++i) {
                const double x = -0.5 * v + h * static_cast<double>(i);
                const double f = aliased_gaussian_pdf(x, 1.0, chain, level);
                mass += (i == 0 || i == pts - 1) ? 0.5 * f : f;
            }
            ok = std::abs(mass * h - 1.0) < 1e-9;
        }
        if (!ok) std::printf("    normalization failed\n");
    }

    const auto spec = build_spec(chain, NoiseModel(1.0, 2.0), 6, 0.3, QuantizerConfig(64), 8);
    {  // encode grid membership and zero-noise round trip
        std::size_t msg_len = 0;
        for (const auto& plan : spec.plans) msg_len += plan.part.a.size();
        CounterRng rng(5);
        for (int trial = 0; trial < 50 && ok; ++trial) {
            std::vector<std::uint8_t> msg(msg_len);
            for (auto& b : msg) b = rng.next_bit();
            const auto enc = encode(msg, rng, spec);
            ok = frame_on_grid(enc.frame, chain) &&
                 multistage_decode(enc.frame.symbols, spec).message_bits == msg;
        }
        if (!ok) std::printf("    round trip failed\n");
    }
    {  // nesting of frozen sets
        std::vector<bool> prev;
        for (const auto& plan : spec.plans) {
            std::vector<bool> frozen(spec.block_length(), false);
            for (int i : plan.part.c) frozen[static_cast<std::size_t>(i)] = true;
            if (!prev.empty())
                for (int i = 0; i < spec.block_length(); ++i)
                    if (frozen[static_cast<std::size_t>(i)] && !prev[static_cast<std::size_t>(i)])
                        ok = false;
            prev = frozen;
        }
        if (!ok) std::printf("    nesting failed\n");
    }
    {  // degradation orderings and BMS bounds
        const QuantizerConfig q(128);
        double prev_i = -1.0;
        for (int level = 1; level <= 2 && ok; ++level) {
            const auto v = build_partition_channel(chain, level, 1.0, q);
            const auto w = build_partition_channel(chain, level, 2.0, q);
            const double iv = channel_mi(v), zv = channel_bhattacharyya(v);
            const double iw = channel_mi(w), zw = channel_bhattacharyya(w);
            ok = iw <= iv + 1e-9 && zw >= zv - 1e-9;             // across sigma
            ok = ok && iv >= prev_i - 1e-9;                       // across levels
            ok = ok && iv + zv >= 1.0 - 1e-9 && iv * iv + zv * zv <= 1.0 + 1e-9;
            ok = ok && iw + zw >= 1.0 - 1e-9 && iw * iw + zw * zw <= 1.0 + 1e-9;
            prev_i = iv;
        }
        if (!ok) std::printf("    ordering/bounds failed\n");
    }
    {  // SC matches MAP on high-posterior draws at N = 4
        SecrecyCodeSpec small;
        small.alpha = 2.5;
        small.levels = 2;
        small.sigma_b = 1.0;
        small.sigma_e = 2.0;
        small.n_exp = 2;
        small.beta = 0.3;
        small.mu = 16;
        small.blocks_per_level = 1;
        LevelPlan plan;
        plan.level = 1;
        plan.part.c = {0};
        plan.part.a = {1, 2, 3};
        plan.eve_mi_a = {0, 0, 0};
        small.plans.push_back(plan);
        const PartitionChain chain2 = small.chain();

        CounterRng driver(99);
        for (int draw = 0; draw < 50 && ok; ++draw) {
            CounterRng rng = driver.stream(static_cast<std::uint64_t>(draw));
            std::vector<std::uint8_t> msg(3);
            for (auto& b : msg) b = rng.next_bit();
            const auto enc = encode(msg, rng, small);
            std::vector<double> z(4);
            for (int j = 0; j < 4; ++j)
                z[static_cast<std::size_t>(j)] =
                    mod_lattice(enc.frame.symbols[static_cast<std::size_t>(j)] +
                                    small.sigma_b * rng.next_normal(),
                                chain2, 2);
            double best = -1.0, total = 0.0;
            std::vector<std::uint8_t> best_u;
            for (int bits = 0; bits < 8; ++bits) {
                std::vector<std::uint8_t> u(4, 0);
                for (int i = 0; i < 3; ++i)
                    u[static_cast<std::size_t>(i) + 1] = static_cast<std::uint8_t>((bits >> i) & 1);
                const auto x = polar_transform(u);
                double like = 1.0;
                for (int j = 0; j < 4; ++j)
                    like *= aliased_gaussian_pdf(
                        z[static_cast<std::size_t>(j)] -
                            chain2.alpha * static_cast<double>(x[static_cast<std::size_t>(j)]),
                        small.sigma_b, chain2, 2);
                total += like;
                if (like > best) {
                    best = like;
                    best_u = u;
                }
            }
            if (best / total > 0.9)
                ok = multistage_decode(z, small).level_u[0] == best_u;
        }
        if (!ok) std::printf("    SC vs MAP failed\n");
    }
    report(7, ok, "property suite green", seconds_since(t0), 300.0);
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    SharedRuns shared;
    criterion1();
    criterion2();
    criterion3();
    criterion4(shared);
    criterion5(shared);
    criterion6(shared);
    criterion7();
    std::printf("%d criterion failure(s); total %.1fs\n", g_failures, seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
