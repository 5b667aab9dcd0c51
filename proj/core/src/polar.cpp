#include "polarlat/polar.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "bms_internal.hpp"

namespace polarlat {

using detail::PairProb;

std::vector<BitChannelStats> polarize(const DiscreteBms& c, int n_exp, const QuantizerConfig& q,
                                      MergeDirection dir) {
    if (n_exp < 1) throw std::invalid_argument("polarize: n_exp must be at least 1");
    const std::size_t target = static_cast<std::size_t>(q.bins) / 2;
    auto reduce = [&](std::vector<PairProb>&& ps) {
        return dir == MergeDirection::degrade ? detail::reduce_degrade(ps, target)
                                              : detail::reduce_upgrade(ps, target);
    };

    std::vector<PairProb> root;
    root.reserve(c.pairs().size());
    for (const auto& p : c.pairs()) {
        if (p.self_paired) {
            const double m = 0.25 * (p.p0 + p.p1);
            root.push_back({m, m});
        } else {
            root.push_back(detail::canonical(p.p0, p.p1));
        }
    }

    std::vector<std::vector<PairProb>> stage{reduce(std::move(root))};
    for (int s = 0; s < n_exp; ++s) {
        std::vector<std::vector<PairProb>> next;
        next.reserve(2 * stage.size());
        for (const auto& ch : stage) {
            next.push_back(reduce(detail::transform_minus(ch)));
            next.push_back(reduce(detail::transform_plus(ch)));
        }
        stage.swap(next);
    }

    std::vector<BitChannelStats> stats;
    stats.reserve(stage.size());
    for (std::size_t i = 0; i < stage.size(); ++i) {
        stats.push_back({static_cast<int>(i),
                         std::clamp(detail::pairs_mi(stage[i]), 0.0, 1.0),
                         std::clamp(detail::pairs_bhattacharyya(stage[i]), 0.0, 1.0)});
    }
    return stats;
}

IndexPartition classify(const std::vector<BitChannelStats>& stats_v,
                        const std::vector<BitChannelStats>& stats_w, double beta) {
    if (stats_v.size() != stats_w.size())
        throw std::invalid_argument("classify: stats sequences must have equal length");
    if (!(beta > 0.0) || !(beta < 0.5))
        throw std::invalid_argument("classify: beta must lie in (0, 0.5)");
    const double n = static_cast<double>(stats_v.size());
    // threshold 2^(-N^beta), compared in the log2 domain to dodge underflow
    const double log2_thr = -std::pow(n, beta);

    IndexPartition part;
    part.beta = beta;
    for (std::size_t i = 0; i < stats_v.size(); ++i) {
        const bool reliable = std::log2(stats_v[i].bhatt) <= log2_thr;  // Z == 0 -> -inf
        const bool secure = std::log2(stats_w[i].mi) <= log2_thr;
        const int idx = static_cast<int>(i);
        if (reliable && secure)
            part.a.push_back(idx);
        else if (reliable)
            part.b.push_back(idx);
        else if (secure)
            part.c.push_back(idx);
        else
            part.d.push_back(idx);
    }
    return part;
}

std::vector<BitRole> assign_roles(const IndexPartition& p, int n) {
    std::vector<BitRole> roles(static_cast<std::size_t>(n), BitRole::frozen);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    auto put = [&](const std::vector<int>& set, BitRole role) {
        for (int i : set) {
            if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)])
                throw std::invalid_argument("assign_roles: partition is not a partition of [0,N)");
            seen[static_cast<std::size_t>(i)] = true;
            roles[static_cast<std::size_t>(i)] = role;
        }
    };
    put(p.a, BitRole::message);
    put(p.b, BitRole::random);
    put(p.c, BitRole::frozen);
    put(p.d, BitRole::random);
    for (bool s : seen)
        if (!s) throw std::invalid_argument("assign_roles: partition does not cover [0,N)");
    return roles;
}

SecrecyCodeSpec build_spec(const PartitionChain& chain, const NoiseModel& noise, int n_exp,
                           double beta, const QuantizerConfig& q, int blocks_per_level) {
    if (blocks_per_level < 1)
        throw std::invalid_argument("build_spec: need at least one payload block");

    SecrecyCodeSpec spec;
    spec.alpha = chain.alpha;
    spec.levels = chain.levels;
    spec.sigma_b = noise.sigma_b;
    spec.sigma_e = noise.sigma_e;
    spec.n_exp = n_exp;
    spec.beta = beta;
    spec.mu = q.bins;
    spec.blocks_per_level = blocks_per_level;

    for (int level = 1; level <= chain.levels - 1; ++level) {
        const auto bob = build_partition_channel(chain, level, noise.sigma_b, q,
                                                 MergeDirection::degrade);
        const auto eve = build_partition_channel(chain, level, noise.sigma_e, q,
                                                 MergeDirection::upgrade);
        const auto stats_v = polarize(bob, n_exp, q, MergeDirection::degrade);
        const auto stats_w = polarize(eve, n_exp, q, MergeDirection::upgrade);

        LevelPlan plan;
        plan.level = level;
        plan.part = classify(stats_v, stats_w, beta);
        plan.eve_mi_a.reserve(plan.part.a.size());
        for (int idx : plan.part.a) plan.eve_mi_a.push_back(stats_w[static_cast<std::size_t>(idx)].mi);
        spec.plans.push_back(std::move(plan));
    }

    // Nesting: the frozen set may only shrink with the level.
    const int n = spec.block_length();
    std::vector<bool> prev_frozen;
    for (const auto& plan : spec.plans) {
        std::vector<bool> frozen(static_cast<std::size_t>(n), false);
        for (int i : plan.part.c) frozen[static_cast<std::size_t>(i)] = true;
        if (!prev_frozen.empty()) {
            for (int i = 0; i < n; ++i) {
                if (frozen[static_cast<std::size_t>(i)] && !prev_frozen[static_cast<std::size_t>(i)])
                    throw construction_error(
                        "build_spec: frozen sets do not nest; increase the quantizer budget");
            }
        }
        prev_frozen.swap(frozen);
    }
    return spec;
}

double secrecy_rate(const SecrecyCodeSpec& spec) {
    double bits = 0.0;
    for (const auto& plan : spec.plans) bits += static_cast<double>(plan.part.a.size());
    return bits / static_cast<double>(spec.block_length());
}

double leakage_bound(const SecrecyCodeSpec& spec) {
    double acc = 0.0;
    for (const auto& plan : spec.plans)
        for (double mi : plan.eve_mi_a) acc += mi;
    return acc;
}

std::string spec_to_json(const SecrecyCodeSpec& spec) {
    nlohmann::json doc;
    doc["format"] = "polarlat-code-spec";
    doc["version"] = 1;
    doc["chain"] = {{"alpha", spec.alpha}, {"levels", spec.levels}};
    doc["noise"] = {{"sigma_b", spec.sigma_b}, {"sigma_e", spec.sigma_e}};
    doc["n_exp"] = spec.n_exp;
    doc["beta"] = spec.beta;
    doc["mu"] = spec.mu;
    doc["blocks_per_level"] = spec.blocks_per_level;
    doc["levels"] = nlohmann::json::array();
    for (const auto& plan : spec.plans) {
        nlohmann::json row;
        row["level"] = plan.level;
        row["a"] = plan.part.a;
        row["b"] = plan.part.b;
        row["c"] = plan.part.c;
        row["d"] = plan.part.d;
        row["eve_mi_a"] = plan.eve_mi_a;
        doc["levels"].push_back(std::move(row));
    }
    return doc.dump(2);
}

SecrecyCodeSpec spec_from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    if (doc.value("format", "") != "polarlat-code-spec" || doc.value("version", 0) != 1)
        throw std::invalid_argument("spec_from_json: unexpected document format/version");
    SecrecyCodeSpec spec;
    spec.alpha = doc.at("chain").at("alpha").get<double>();
    spec.levels = doc.at("chain").at("levels").get<int>();
    spec.sigma_b = doc.at("noise").at("sigma_b").get<double>();
    spec.sigma_e = doc.at("noise").at("sigma_e").get<double>();
    spec.n_exp = doc.at("n_exp").get<int>();
    spec.beta = doc.at("beta").get<double>();
    spec.mu = doc.at("mu").get<int>();
    spec.blocks_per_level = doc.at("blocks_per_level").get<int>();
    for (const auto& row : doc.at("levels")) {
        LevelPlan plan;
        plan.level = row.at("level").get<int>();
        plan.part.a = row.at("a").get<std::vector<int>>();
        plan.part.b = row.at("b").get<std::vector<int>>();
        plan.part.c = row.at("c").get<std::vector<int>>();
        plan.part.d = row.at("d").get<std::vector<int>>();
        plan.part.beta = spec.beta;
        plan.eve_mi_a = row.at("eve_mi_a").get<std::vector<double>>();
        spec.plans.push_back(std::move(plan));
    }
    return spec;
}

}  // namespace polarlat
