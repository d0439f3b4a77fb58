#include "reconfig/approx_cut.hpp"

#include <algorithm>
#include <numeric>

#include "reconfig/prng.hpp"
#include "reconfig/valuation.hpp"

namespace reconfig {

namespace {

// Survival of one edge through one half with everything pinned: start pair,
// target pair, and who flips first when both endpoints move.
Rat survival_fixed(std::pair<int, int> s, std::pair<int, int> t, FlipOrder order) {
    auto [su, sv] = s;
    auto [tu, tv] = t;
    if (su == sv) return 0;
    bool fu = su != tu, fv = sv != tv;
    if (!fu && !fv) return 1;
    if (fu && !fv) return tu != sv ? Rat(1) : Rat(0);
    if (!fu && fv) return su != tv ? Rat(1) : Rat(0);
    int u_first = (tu != sv && tu != tv) ? 1 : 0;
    int v_first = (su != tv && tu != tv) ? 1 : 0;
    switch (order) {
        case FlipOrder::u_first: return u_first;
        case FlipOrder::v_first: return v_first;
        case FlipOrder::uniform: return Rat(u_first + v_first, 2);
    }
    return 0;
}

}  // namespace

Rat edge_survival_prob(int k, std::pair<int, int> start,
                       std::optional<std::pair<int, int>> target, FlipOrder order) {
    if (k < 2) throw ValidationError("edge survival needs k >= 2");
    auto in_range = [&](std::pair<int, int> p) {
        return p.first >= 1 && p.first <= k && p.second >= 1 && p.second <= k;
    };
    if (!in_range(start) || (target && !in_range(*target)))
        throw ValidationError("color out of range");
    if (target) return survival_fixed(start, *target, order);
    Rat sum = 0;
    for (int tu = 1; tu <= k; ++tu)
        for (int tv = 1; tv <= k; ++tv) sum += survival_fixed(start, {tu, tv}, order);
    return sum / (Rat(k) * k);
}

std::uint64_t integer_power_floor(std::uint64_t m, const Rat& exponent) {
    if (m == 0) return 0;
    Int num = rat_num(exponent), den = rat_den(exponent);
    Int target = boost::multiprecision::pow(Int(m), static_cast<unsigned>(num));
    std::uint64_t lo = 1, hi = m > 1 ? m : 1;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (boost::multiprecision::pow(Int(mid), static_cast<unsigned>(den)) <= target)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

std::pair<CutSequence, Coloring> uplift_low_value(const WeightedMultigraph& g, const Coloring& f) {
    if (g.edges.empty()) throw ValidationError("uplift needs a nonempty edge list");
    if (f.n() != g.n) throw ValidationError("coloring length differs from vertex count");
    int k = f.k;
    Rat threshold = Rat(1) - Rat(1, k);  // monochromatic weight <= W/k

    std::vector<std::vector<size_t>> incident(static_cast<size_t>(g.n) + 1);
    for (size_t ei = 0; ei < g.edges.size(); ++ei) {
        incident[static_cast<size_t>(g.edges[ei].u)].push_back(ei);
        incident[static_cast<size_t>(g.edges[ei].v)].push_back(ei);
    }

    CutSequence seq;
    Coloring cur = f;
    seq.steps.push_back(cur);

    while (cut_value(g, cur) < threshold) {
        // Best single recoloring: for each vertex, the color minimizing
        // incident monochromatic weight; strictly improving moves only.
        int best_v = 0, best_c = 0;
        Rat best_gain = 0;
        for (int v = 1; v <= g.n; ++v) {
            std::vector<Rat> mono(static_cast<size_t>(k) + 1, Rat(0));
            for (size_t ei : incident[static_cast<size_t>(v)]) {
                const auto& e = g.edges[ei];
                int other = (e.u == v) ? e.v : e.u;
                mono[static_cast<size_t>(cur.colors[static_cast<size_t>(other - 1)])] += e.w;
            }
            int cur_c = cur.colors[static_cast<size_t>(v - 1)];
            int cand = 1;
            for (int c = 2; c <= k; ++c)
                if (mono[static_cast<size_t>(c)] < mono[static_cast<size_t>(cand)]) cand = c;
            Rat gain = mono[static_cast<size_t>(cur_c)] - mono[static_cast<size_t>(cand)];
            if (gain > best_gain) {
                best_gain = gain;
                best_v = v;
                best_c = cand;
            }
        }
        if (best_v == 0)
            throw ValidationError("no improving recoloring below value 1 - 1/k");
        cur.colors[static_cast<size_t>(best_v - 1)] = best_c;
        seq.steps.push_back(cur);
    }
    return {std::move(seq), std::move(cur)};
}

namespace {

// One edge's survival bookkeeping across the whole routed sequence.
struct EdgeState {
    int u = 0, v = 0;
    Rat weight;
    bool alive_ends = true;      // bichromatic throughout the uplift segments
    std::pair<int, int> s{0, 0}; // colors at the (uplifted) start
    std::pair<int, int> e{0, 0}; // colors at the (uplifted) end
    FlipOrder order1 = FlipOrder::uniform;  // who flips first, start -> F
    FlipOrder order2 = FlipOrder::uniform;  // who flips first, F -> end
    Rat cond;                    // current conditional survival probability
};

struct Derand {
    const WeightedMultigraph& g;
    int k;
    std::vector<int> F;                 // 0 = undecided
    std::vector<EdgeState> edges;
    std::vector<std::vector<size_t>> incident;
    Rat estimator = 0;

    Derand(const WeightedMultigraph& graph, int kk) : g(graph), k(kk) {
        F.assign(static_cast<size_t>(g.n) + 1, 0);
        incident.resize(static_cast<size_t>(g.n) + 1);
    }

    Rat cond_survival(const EdgeState& es) const {
        if (!es.alive_ends) return 0;
        int fu = F[static_cast<size_t>(es.u)], fv = F[static_cast<size_t>(es.v)];
        Rat sum = 0;
        int count = 0;
        for (int tu = fu ? fu : 1; tu <= (fu ? fu : k); ++tu) {
            for (int tv = fv ? fv : 1; tv <= (fv ? fv : k); ++tv) {
                ++count;
                Rat h1 = survival_fixed(es.s, {tu, tv}, es.order1);
                if (h1 == 0) continue;
                Rat h2 = survival_fixed({tu, tv}, es.e, es.order2);
                if (h2 == 0) continue;
                sum += h1 * h2;
            }
        }
        return sum / count;
    }

    void refresh_edge(size_t ei) {
        Rat next = cond_survival(edges[ei]);
        estimator += edges[ei].weight * (next - edges[ei].cond);
        edges[ei].cond = next;
    }

    // Estimator delta if vertex v were assigned target color c.
    Rat color_delta(int v, int c) {
        Rat delta = 0;
        F[static_cast<size_t>(v)] = c;
        for (size_t ei : incident[static_cast<size_t>(v)])
            delta += edges[ei].weight * (cond_survival(edges[ei]) - edges[ei].cond);
        F[static_cast<size_t>(v)] = 0;
        return delta;
    }
};

}  // namespace

CutApproxResult approx_cut_reconfig(const CutReconfigInstance& inst, const CutAlgoConfig& cfg) {
    inst.validate();
    if (inst.k < 2) throw ValidationError("approx-cut needs k >= 2");
    if (inst.graph.edges.empty()) throw ValidationError("approx-cut needs a nonempty edge list");

    int k = inst.k;
    int n = inst.graph.n;
    Rat eps = cfg.epsilon;
    if (eps == 0) eps = Rat(1, Int(k) * k * k);
    if (eps <= 0 || eps >= Rat(1) - Rat(1, k))
        throw ValidationError("epsilon must lie in (0, 1 - 1/k)");

    CutApproxResult result;

    bool unit_simple = true;
    {
        std::vector<std::pair<int, int>> seen;
        for (const auto& e : inst.graph.edges) {
            if (e.w != 1) unit_simple = false;
            seen.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
        }
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) unit_simple = false;
    }
    if (!unit_simple)
        result.notes.push_back(
            "weighted or parallel edges: guarantee is best effort (stated for simple graphs)");

    Rat val_start = cut_value(inst.graph, inst.start);
    Rat val_end = cut_value(inst.graph, inst.end);
    result.guarantee_factor = (Rat(1) - Rat(1, k) - eps) * (Rat(1) - Rat(1, k) - eps);
    result.guarantee_bound = result.guarantee_factor * std::min(val_start, val_end);

    // Stage 0: uplift endpoints of value below 1/2.
    CutSequence prefix, suffix;
    Coloring s2 = inst.start, e2 = inst.end;
    if (val_start < Rat(1, 2)) {
        auto lifted = uplift_low_value(inst.graph, inst.start);
        prefix = std::move(lifted.first);
        s2 = std::move(lifted.second);
        result.notes.push_back("start endpoint uplifted (value below 1/2)");
    } else {
        prefix.steps.push_back(inst.start);
    }
    if (val_end < Rat(1, 2)) {
        auto lifted = uplift_low_value(inst.graph, inst.end);
        suffix = std::move(lifted.first);  // runs end -> e2; reversed on emit
        e2 = std::move(lifted.second);
        result.notes.push_back("end endpoint uplifted (value below 1/2)");
    } else {
        suffix.steps.push_back(inst.end);
    }

    std::uint64_t m = inst.graph.edges.size();
    result.high_prob_regime = m >= 1000000ull;
    std::uint64_t delta_threshold = integer_power_floor(m, cfg.degree_exponent);
    auto degrees = inst.graph.entry_degrees();
    std::vector<int> low_vertices, high_vertices;
    for (int v = 1; v <= n; ++v) {
        if (static_cast<std::uint64_t>(degrees[static_cast<size_t>(v)]) <= delta_threshold)
            low_vertices.push_back(v);
        else
            high_vertices.push_back(v);
    }

    // Flip phases: start -> F recolors low then high; F -> end recolors high
    // then low. Cross-phase edge orders are forced; same-phase orders are the
    // random/derandomized choice.
    auto half1_phase = [&](int v) {
        return static_cast<std::uint64_t>(degrees[static_cast<size_t>(v)]) <= delta_threshold ? 1
                                                                                              : 2;
    };
    auto half2_phase = [&](int v) { return half1_phase(v) == 2 ? 3 : 4; };

    std::vector<int> F(static_cast<size_t>(n) + 1, 0);
    std::vector<int> order_ph1, order_ph2, order_ph3, order_ph4;

    if (cfg.mode == AlgoMode::random) {
        SplitMix64 rng(cfg.seed);
        for (int v = 1; v <= n; ++v) F[static_cast<size_t>(v)] = 1 + static_cast<int>(rng.below(k));
        order_ph1 = low_vertices;
        rng.shuffle(order_ph1);
        order_ph2 = high_vertices;
        rng.shuffle(order_ph2);
        // The sampled orders are reused on the way back, matching the
        // randomized procedure; derand mode instead rebuilds each phase.
        order_ph3 = order_ph2;
        order_ph4 = order_ph1;
    } else {
        Derand d(inst.graph, k);
        d.edges.reserve(inst.graph.edges.size());
        for (const auto& e : inst.graph.edges) {
            EdgeState es;
            es.u = e.u;
            es.v = e.v;
            es.weight = e.w;
            es.s = {s2.colors[static_cast<size_t>(e.u - 1)], s2.colors[static_cast<size_t>(e.v - 1)]};
            es.e = {e2.colors[static_cast<size_t>(e.u - 1)], e2.colors[static_cast<size_t>(e.v - 1)]};
            auto bichromatic_throughout = [&](const CutSequence& seg) {
                for (const auto& step : seg.steps)
                    if (step.colors[static_cast<size_t>(e.u - 1)] ==
                        step.colors[static_cast<size_t>(e.v - 1)])
                        return false;
                return true;
            };
            es.alive_ends = bichromatic_throughout(prefix) && bichromatic_throughout(suffix);
            int p1u = half1_phase(e.u), p1v = half1_phase(e.v);
            es.order1 = p1u == p1v ? FlipOrder::uniform
                                   : (p1u < p1v ? FlipOrder::u_first : FlipOrder::v_first);
            int p2u = half2_phase(e.u), p2v = half2_phase(e.v);
            es.order2 = p2u == p2v ? FlipOrder::uniform
                                   : (p2u < p2v ? FlipOrder::u_first : FlipOrder::v_first);
            d.incident[static_cast<size_t>(e.u)].push_back(d.edges.size());
            d.incident[static_cast<size_t>(e.v)].push_back(d.edges.size());
            d.edges.push_back(std::move(es));
        }
        for (size_t ei = 0; ei < d.edges.size(); ++ei) {
            d.edges[ei].cond = d.cond_survival(d.edges[ei]);
            d.estimator += d.edges[ei].weight * d.edges[ei].cond;
        }
        result.estimator_root = d.estimator / inst.graph.total_weight();

        // Color decisions, input vertex order.
        for (int v = 1; v <= n; ++v) {
            int best_c = 1;
            Rat best_delta = d.color_delta(v, 1);
            for (int c = 2; c <= k; ++c) {
                Rat delta = d.color_delta(v, c);
                if (delta > best_delta) {
                    best_delta = delta;
                    best_c = c;
                }
            }
            if (best_delta < 0)
                throw std::logic_error("estimator decreased at a color decision");
            d.F[static_cast<size_t>(v)] = best_c;
            F[static_cast<size_t>(v)] = best_c;
            for (size_t ei : d.incident[static_cast<size_t>(v)]) d.refresh_edge(ei);
        }

        // Greedy flip order per phase; committing u fixes u-before-x for every
        // x still unplaced in the same phase.
        auto build_order = [&](const std::vector<int>& pool, bool half1) {
            std::vector<int> remaining = pool, order;
            std::vector<char> in_pool(static_cast<size_t>(n) + 1, 0);
            for (int v : pool) in_pool[static_cast<size_t>(v)] = 1;
            while (!remaining.empty()) {
                int best_v = -1;
                Rat best_delta;
                for (int u : remaining) {
                    Rat delta = 0;
                    for (size_t ei : d.incident[static_cast<size_t>(u)]) {
                        EdgeState& es = d.edges[ei];
                        int other = es.u == u ? es.v : es.u;
                        if (!in_pool[static_cast<size_t>(other)]) continue;
                        FlipOrder& slot = half1 ? es.order1 : es.order2;
                        if (slot != FlipOrder::uniform) continue;  // other already placed
                        FlipOrder saved = slot;
                        slot = (es.u == u) ? FlipOrder::u_first : FlipOrder::v_first;
                        delta += es.weight * (d.cond_survival(es) - es.cond);
                        slot = saved;
                    }
                    if (best_v < 0 || delta > best_delta) {
                        best_v = u;
                        best_delta = delta;
                    }
                }
                if (best_delta < 0)
                    throw std::logic_error("estimator decreased at an order decision");
                order.push_back(best_v);
                for (size_t ei : d.incident[static_cast<size_t>(best_v)]) {
                    EdgeState& es = d.edges[ei];
                    int other = es.u == best_v ? es.v : es.u;
                    if (!in_pool[static_cast<size_t>(other)]) continue;
                    FlipOrder& slot = half1 ? es.order1 : es.order2;
                    if (slot != FlipOrder::uniform) continue;
                    slot = (es.u == best_v) ? FlipOrder::u_first : FlipOrder::v_first;
                    d.refresh_edge(ei);
                }
                remaining.erase(std::find(remaining.begin(), remaining.end(), best_v));
            }
            return order;
        };
        order_ph1 = build_order(low_vertices, true);
        order_ph2 = build_order(high_vertices, true);
        order_ph3 = build_order(high_vertices, false);
        order_ph4 = build_order(low_vertices, false);
    }

    // Emit: prefix, the four routed phases, reversed suffix.
    CutSequence seq = prefix;
    Coloring cur = s2;
    auto recolor = [&](int v, int c) {
        if (cur.colors[static_cast<size_t>(v - 1)] == c) return;
        cur.colors[static_cast<size_t>(v - 1)] = c;
        seq.steps.push_back(cur);
    };
    for (int v : order_ph1) recolor(v, F[static_cast<size_t>(v)]);
    for (int v : order_ph2) recolor(v, F[static_cast<size_t>(v)]);
    for (int v : order_ph3) recolor(v, e2.colors[static_cast<size_t>(v - 1)]);
    for (int v : order_ph4) recolor(v, e2.colors[static_cast<size_t>(v - 1)]);
    for (size_t i = suffix.steps.size(); i-- > 1;) seq.steps.push_back(suffix.steps[i - 1]);

    validate_sequence(inst, seq);
    result.achieved = sequence_value(inst, seq);
    result.sequence = std::move(seq);
    return result;
}

}  // namespace reconfig
