#include "bms_internal.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace polarlat::detail {

std::vector<PairProb> transform_minus(const std::vector<PairProb>& in) {
    const std::size_t k = in.size();
    std::vector<PairProb> out;
    out.reserve(2 * k * k);
    for (std::size_t i = 0; i < k; ++i) {
        const double ai = in[i].a, bi = in[i].b;
        for (std::size_t j = 0; j < k; ++j) {
            const double aj = in[j].a, bj = in[j].b;
            // second symbol in both orientations; first orientation fixed by symmetry
            out.push_back(canonical(0.5 * (ai * aj + bi * bj), 0.5 * (bi * aj + ai * bj)));
            out.push_back(canonical(0.5 * (ai * bj + bi * aj), 0.5 * (bi * bj + ai * aj)));
        }
    }
    return out;
}

std::vector<PairProb> transform_plus(const std::vector<PairProb>& in) {
    const std::size_t k = in.size();
    std::vector<PairProb> out;
    out.reserve(2 * k * k);
    for (std::size_t i = 0; i < k; ++i) {
        const double ai = in[i].a, bi = in[i].b;
        for (std::size_t j = 0; j < k; ++j) {
            const double aj = in[j].a, bj = in[j].b;
            // the two (u1, orientation) orbits collapse pairwise; masses doubled
            out.push_back(canonical(ai * aj, bi * bj));
            out.push_back(canonical(bi * aj, ai * bj));
        }
    }
    return out;
}

namespace {

constexpr double kLlrCap = 48.0;  // e^48 ~ 7e20; beyond this LR is effectively infinite

struct Node {
    double a = 0.0;
    double b = 0.0;
    int prev = -1;
    int next = -1;
    unsigned version = 0;
    bool alive = false;
};

struct Candidate {
    double delta_i;
    int left;
    int right;
    unsigned vl;
    unsigned vr;
    bool operator>(const Candidate& o) const { return delta_i > o.delta_i; }
};

using CandidateQueue = std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>>;

// Greedy adjacent merge on an LR-sorted node list until <= target survive.
std::vector<PairProb> greedy_degrade(std::vector<Node>& nodes, int head, std::size_t alive,
                                     std::size_t target) {
    CandidateQueue queue;
    auto push_candidate = [&](int l) {
        const int r = nodes[l].next;
        if (r < 0) return;
        const double merged = pair_mi_term(nodes[l].a + nodes[r].a, nodes[l].b + nodes[r].b);
        const double d = pair_mi_term(nodes[l].a, nodes[l].b) +
                         pair_mi_term(nodes[r].a, nodes[r].b) - merged;
        queue.push({std::max(d, 0.0), l, r, nodes[l].version, nodes[r].version});
    };
    for (int i = head; i >= 0; i = nodes[i].next) push_candidate(i);

    while (alive > target && !queue.empty()) {
        const Candidate c = queue.top();
        queue.pop();
        Node& l = nodes[c.left];
        Node& r = nodes[c.right];
        if (!l.alive || !r.alive || l.version != c.vl || r.version != c.vr || l.next != c.right)
            continue;
        l.a += r.a;
        l.b += r.b;
        l.version++;
        r.alive = false;
        l.next = r.next;
        if (r.next >= 0) nodes[r.next].prev = c.left;
        --alive;
        if (l.prev >= 0) push_candidate(l.prev);
        push_candidate(c.left);
    }

    std::vector<PairProb> out;
    out.reserve(alive);
    for (int i = head; i >= 0; i = nodes[i].next)
        if (nodes[i].a + nodes[i].b > 0.0) out.push_back(canonical(nodes[i].a, nodes[i].b));
    return out;
}

}  // namespace

namespace {

// Largest finite LLR in the list, capped; sets the pre-binning range so weak
// channels (tiny LLR spread) still resolve into distinct buckets.
double llr_range(const std::vector<PairProb>& in) {
    double lmax = 0.0;
    for (const auto& p : in) {
        if (p.b <= 0.0 || p.a <= 0.0) continue;
        lmax = std::max(lmax, std::log(p.a / p.b));
    }
    return std::clamp(lmax, 1e-9, kLlrCap);
}

}  // namespace

std::vector<PairProb> reduce_degrade(const std::vector<PairProb>& in, std::size_t target_pairs) {
    if (in.size() <= target_pairs) {
        std::vector<PairProb> out;
        out.reserve(in.size());
        for (const auto& p : in)
            if (p.a + p.b > 0.0) out.push_back(p);
        if (out.size() <= target_pairs) return out;
        return reduce_degrade(out, target_pairs);
    }

    // Fine pre-binning by log likelihood ratio; merging bin-mates is a plain
    // output coarsening, so the result stays degraded.
    const std::size_t fine = std::max<std::size_t>(16 * target_pairs, 1024);
    std::vector<Node> nodes(fine + 1);  // last slot: LR = infinity
    const double lmax = llr_range(in);
    const double scale = static_cast<double>(fine) / lmax;
    for (const auto& p : in) {
        if (p.a + p.b <= 0.0) continue;
        std::size_t idx;
        if (p.b <= 0.0) {
            idx = fine;
        } else {
            const double llr = std::log(p.a / p.b);
            idx = llr >= lmax ? fine - 1 : static_cast<std::size_t>(llr * scale);
            if (idx >= fine) idx = fine - 1;
        }
        nodes[idx].a += p.a;
        nodes[idx].b += p.b;
    }

    int head = -1, tail = -1;
    std::size_t alive = 0;
    for (std::size_t i = 0; i <= fine; ++i) {
        if (nodes[i].a + nodes[i].b <= 0.0) continue;
        nodes[i].alive = true;
        nodes[i].prev = tail;
        if (tail >= 0)
            nodes[tail].next = static_cast<int>(i);
        else
            head = static_cast<int>(i);
        tail = static_cast<int>(i);
        ++alive;
    }
    if (head < 0) return {};
    return greedy_degrade(nodes, head, alive, target_pairs);
}

namespace {

// Split a symbol (a, b) with LR in [theta_l, theta_r] into point masses at the
// two bracket ratios, preserving both conditionals. theta_r may be infinite.
struct UpgradeSplit {
    double xa, xb;  // at theta_l
    double ya, yb;  // at theta_r
};

UpgradeSplit split_outward(double a, double b, double theta_l, double theta_r) {
    UpgradeSplit s{};
    if (std::isinf(theta_r)) {
        const double xb = b;
        const double xa = std::min(theta_l * b, a);
        s = {xa, xb, a - xa, 0.0};
    } else {
        double xb = (theta_r * b - a) / (theta_r - theta_l);
        xb = std::clamp(xb, 0.0, b);
        const double xa = std::min(theta_l * xb, a);
        s = {xa, xb, a - xa, b - xb};
    }
    return s;
}

}  // namespace

namespace {

struct UpCandidate {
    double delta_i;
    int victim;
    int left;
    int right;
    unsigned vl;
    unsigned vr;
    bool operator>(const UpCandidate& o) const { return delta_i > o.delta_i; }
};

}  // namespace

std::vector<PairProb> reduce_upgrade(const std::vector<PairProb>& in, std::size_t target_pairs) {
    if (in.size() <= target_pairs) {
        std::vector<PairProb> out;
        out.reserve(in.size());
        for (const auto& p : in)
            if (p.a + p.b > 0.0) out.push_back(p);
        return out;
    }

    // Point masses at fine LLR grid edges 0..kLlrCap plus an infinity slot.
    // Every input symbol splits between its bucket's two edges, which is the
    // mass-preserving outward move; the result upgrades the input channel.
    // The LR=1 edge and the infinity slot stay alive throughout so eliminated
    // boundary mass always has a destination.
    const std::size_t fine = std::max<std::size_t>(16 * target_pairs, 1024);
    std::vector<Node> nodes(fine + 2);  // edge j at llr j/scale; last slot infinity
    const double lmax = llr_range(in);
    const double scale = static_cast<double>(fine) / lmax;
    const int inf_slot = static_cast<int>(fine) + 1;

    auto slot_theta = [&](int idx) -> double {
        if (idx >= inf_slot) return std::numeric_limits<double>::infinity();
        return std::exp(static_cast<double>(idx) / scale);
    };
    auto deposit = [&](std::size_t slot, double a, double b) {
        nodes[slot].a += a;
        nodes[slot].b += b;
    };
    for (const auto& p : in) {
        if (p.a + p.b <= 0.0) continue;
        if (p.b <= 0.0) {
            deposit(inf_slot, p.a, 0.0);
            continue;
        }
        const double llr = std::log(p.a / p.b);
        if (llr >= lmax) {
            const auto s = split_outward(p.a, p.b, slot_theta(static_cast<int>(fine)),
                                         std::numeric_limits<double>::infinity());
            deposit(fine, s.xa, s.xb);
            deposit(inf_slot, s.ya, s.yb);
            continue;
        }
        const std::size_t j = std::min(static_cast<std::size_t>(llr * scale), fine - 1);
        const auto s = split_outward(p.a, p.b, slot_theta(static_cast<int>(j)),
                                     slot_theta(static_cast<int>(j) + 1));
        deposit(j, s.xa, s.xb);
        deposit(j + 1, s.ya, s.yb);
    }

    int head = 0, tail = -1;
    std::size_t alive = 0;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        const bool sentinel = (i == 0 || i == inf_slot);
        if (!sentinel && nodes[i].a + nodes[i].b <= 0.0) continue;
        nodes[i].alive = true;
        nodes[i].prev = tail;
        if (tail >= 0) nodes[tail].next = i;
        tail = i;
        ++alive;
    }

    std::priority_queue<UpCandidate, std::vector<UpCandidate>, std::greater<>> queue;
    auto push_candidate = [&](int m) {
        if (!nodes[m].alive || m == 0 || m == inf_slot) return;
        const int l = nodes[m].prev;
        const int r = nodes[m].next;
        const auto s = split_outward(nodes[m].a, nodes[m].b, slot_theta(l), slot_theta(r));
        const double gain = pair_mi_term(s.xa, s.xb) + pair_mi_term(s.ya, s.yb) -
                            pair_mi_term(nodes[m].a, nodes[m].b);
        queue.push({std::max(gain, 0.0), m, l, r, nodes[l].version, nodes[r].version});
    };
    for (int i = head; i >= 0; i = nodes[i].next) push_candidate(i);

    while (alive > target_pairs && !queue.empty()) {
        const UpCandidate c = queue.top();
        queue.pop();
        Node& m = nodes[c.victim];
        if (!m.alive || m.prev != c.left || m.next != c.right) continue;
        if (nodes[c.left].version != c.vl || nodes[c.right].version != c.vr) continue;

        const auto s = split_outward(m.a, m.b, slot_theta(c.left), slot_theta(c.right));
        m.alive = false;
        nodes[c.left].a += s.xa;
        nodes[c.left].b += s.xb;
        nodes[c.left].version++;
        nodes[c.left].next = c.right;
        nodes[c.right].a += s.ya;
        nodes[c.right].b += s.yb;
        nodes[c.right].version++;
        nodes[c.right].prev = c.left;
        --alive;
        push_candidate(c.left);
        push_candidate(c.right);
    }

    std::vector<PairProb> out;
    out.reserve(alive);
    for (int i = head; i >= 0; i = nodes[i].next)
        if (nodes[i].a + nodes[i].b > 0.0) out.push_back(canonical(nodes[i].a, nodes[i].b));
    return out;
}

}  // namespace polarlat::detail
