#include "reconfig/approx_sat.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "reconfig/prng.hpp"
#include "reconfig/valuation.hpp"

namespace reconfig {

namespace {

Int factorial(int n) {
    Int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

Int binom(int n, int j) {
    if (j < 0 || j > n) return 0;
    Int b = 1;
    for (int i = 0; i < j; ++i) {
        b *= (n - i);
        b /= (i + 1);
    }
    return b;
}

// Probability that, in a uniform order over A "down" flips and U "up" flips,
// every down flip precedes every up flip. This is the event that one leg of
// the route momentarily loses all true literals of a clause.
Rat order_failure(int down, int up) {
    return Rat(factorial(down) * factorial(up), factorial(down + up));
}

// Conditional survival of one clause through start -> rho -> end with some
// rho literal-truth bits pinned. Per position: truth of the literal under the
// endpoints, and -1 / 0 / 1 for the rho truth. Both legs' flip orders are
// uniform. Works position-count-wise:
//   survival = 1 - E[f1] - E[f2] + E[f1 f2],
// where f1 (f2) is the failure of the first (second) leg, nonzero only when
// no start-true (end-true) literal stays true under rho.
Rat clause_cond_survival(const std::vector<std::uint8_t>& s_true,
                         const std::vector<std::uint8_t>& e_true,
                         const std::vector<int>& rho_truth) {
    int k = static_cast<int>(s_true.size());
    int a1 = 0, b2 = 0;             // #start-true, #end-true
    bool s_pinned_one = false;      // a start-true literal with rho pinned true
    bool e_pinned_one = false;
    int forced1 = 0, forced2 = 0;   // undecided bits forced to 0 by the event
    int nf1 = 0, u1dec = 0;         // start-false: undecided count, pinned-ones
    int nf2 = 0, u2dec = 0;
    int nd = 0, udec = 0;           // both-false: undecided count, pinned-ones
    for (int i = 0; i < k; ++i) {
        bool st = s_true[static_cast<size_t>(i)], et = e_true[static_cast<size_t>(i)];
        int r = rho_truth[static_cast<size_t>(i)];
        a1 += st;
        b2 += et;
        if (st && r == 1) s_pinned_one = true;
        if (et && r == 1) e_pinned_one = true;
        if (st && r == -1) ++forced1;
        if (et && r == -1) ++forced2;
        if (!st) {
            if (r == -1) ++nf1;
            if (r == 1) ++u1dec;
        }
        if (!et) {
            if (r == -1) ++nf2;
            if (r == 1) ++u2dec;
        }
        if (!st && !et) {
            if (r == -1) ++nd;
            if (r == 1) ++udec;
        }
    }
    if (a1 == 0 || b2 == 0)
        throw ValidationError("clause survival needs satisfying endpoint truth vectors");

    auto half_pow = [](int e) { return Rat(1, Int(1) << e); };
    Rat e_f1 = 0, e_f2 = 0, e_f1f2 = 0;
    if (!s_pinned_one) {
        Rat scale = half_pow(forced1 + nf1);
        for (int j = 0; j <= nf1; ++j)
            e_f1 += scale * binom(nf1, j) * order_failure(a1, u1dec + j);
    }
    if (!e_pinned_one) {
        Rat scale = half_pow(forced2 + nf2);
        for (int j = 0; j <= nf2; ++j)
            e_f2 += scale * binom(nf2, j) * order_failure(u2dec + j, b2);
    }
    if (!s_pinned_one && !e_pinned_one) {
        int forced12 = 0;
        for (int i = 0; i < k; ++i)
            if ((s_true[static_cast<size_t>(i)] || e_true[static_cast<size_t>(i)]) &&
                rho_truth[static_cast<size_t>(i)] == -1)
                ++forced12;
        Rat scale = half_pow(forced12 + nd);
        for (int j = 0; j <= nd; ++j)
            e_f1f2 += scale * binom(nd, j) * order_failure(a1, udec + j) *
                      order_failure(udec + j, b2);
    }
    return Rat(1) - e_f1 - e_f2 + e_f1f2;
}

}  // namespace

Rat binom_sum(int n, int shift) {
    if (n < 0) throw ValidationError("binom_sum needs n >= 0");
    if (shift != 1 && shift != 2) throw ValidationError("binom_sum shift must be 1 or 2");
    Rat sum = 0;
    for (int j = 0; j <= n; ++j) sum += Rat(binom(n, j), j + shift);
    return sum;
}

Rat clause_survival_prob(int k, const std::vector<std::uint8_t>& start_true,
                         const std::vector<std::uint8_t>& end_true) {
    if (static_cast<int>(start_true.size()) != k || static_cast<int>(end_true.size()) != k)
        throw ValidationError("truth vector length differs from k");
    int a = 0, b = 0, c = 0;
    for (int i = 0; i < k; ++i) {
        bool st = start_true[static_cast<size_t>(i)], et = end_true[static_cast<size_t>(i)];
        a += st && !et;
        b += !st && et;
        c += st && et;
    }
    if (a + c == 0 || b + c == 0)
        throw ValidationError("truth vector violates the clause");

    // Exchangeable positions: survival depends only on the class counts.
    static std::map<std::array<int, 4>, Rat> memo;
    static std::mutex memo_mutex;
    std::array<int, 4> key{k, a, b, c};
    {
        std::lock_guard<std::mutex> lock(memo_mutex);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    std::vector<std::uint8_t> s(static_cast<size_t>(k), 0), e(static_cast<size_t>(k), 0);
    for (int i = 0; i < a; ++i) s[static_cast<size_t>(i)] = 1;
    for (int i = a; i < a + b; ++i) e[static_cast<size_t>(i)] = 1;
    for (int i = a + b; i < a + b + c; ++i) s[static_cast<size_t>(i)] = e[static_cast<size_t>(i)] = 1;
    Rat value = clause_cond_survival(s, e, std::vector<int>(static_cast<size_t>(k), -1));
    std::lock_guard<std::mutex> lock(memo_mutex);
    memo.emplace(key, value);
    return value;
}

namespace {

struct ClauseState {
    std::vector<int> vars;                // 0-based variable indices
    std::vector<std::uint8_t> s_true;     // literal truth under start
    std::vector<std::uint8_t> e_true;     // literal truth under end
    std::vector<std::uint8_t> lit_pos;    // literal polarity (1 = positive)
    // leg-1 order bookkeeping
    bool safe1 = false, failed1 = false;
    int a1_rem = 0, u1_rem = 0;
    Rat s2_fixed;                         // expected leg-2 survival once rho is set
    // leg-2 order bookkeeping
    bool safe2 = false, failed2 = false;
    int a2_rem = 0, u2_rem = 0;
    int s1_final = 1;                     // resolved after leg-1 ordering

    Rat s1_state() const {
        if (failed1) return 0;
        if (safe1) return 1;
        return Rat(1) - order_failure(a1_rem, u1_rem);
    }
    Rat s2_state() const {
        if (failed2) return 0;
        if (safe2) return 1;
        return Rat(1) - order_failure(a2_rem, u2_rem);
    }
};

}  // namespace

SatApproxResult approx_sat_reconfig(const SatReconfigInstance& inst, const SatAlgoConfig& cfg) {
    inst.validate();
    const CnfFormula& phi = inst.formula;
    if (phi.k == 0) throw ValidationError("approx-sat needs a uniform clause width, not mixed");
    if (phi.k < 3) throw ValidationError("approx-sat needs clause width k >= 3");
    if (phi.clauses.empty()) throw ValidationError("approx-sat needs a nonempty formula");
    {
        auto viols = endpoint_violations(inst);
        if (!viols.empty())
            throw ValidationError(std::string(viols.front().start ? "start" : "end") +
                                  " assignment violates clause " +
                                  std::to_string(viols.front().clause_index));
    }

    int n = phi.n, k = phi.k, m = phi.m();
    SatApproxResult result;
    result.guarantee_bound = Rat(1) - Rat(1, k - 1) - Rat(1, k);

    // Clause-local truth vectors and the unconditional survival floor.
    std::vector<ClauseState> clauses(static_cast<size_t>(m));
    std::vector<std::vector<std::pair<int, int>>> var_clauses(static_cast<size_t>(n));
    Rat root_sum = 0;
    bool first_floor = true;
    for (int j = 0; j < m; ++j) {
        ClauseState& cs = clauses[static_cast<size_t>(j)];
        for (int lit : phi.clauses[static_cast<size_t>(j)]) {
            int var = std::abs(lit) - 1;
            bool pos = lit > 0;
            cs.vars.push_back(var);
            cs.lit_pos.push_back(pos);
            cs.s_true.push_back(inst.start.bits[static_cast<size_t>(var)] == pos);
            cs.e_true.push_back(inst.end.bits[static_cast<size_t>(var)] == pos);
            var_clauses[static_cast<size_t>(var)].push_back(
                {j, static_cast<int>(cs.vars.size()) - 1});
        }
        Rat p = clause_survival_prob(k, cs.s_true, cs.e_true);
        root_sum += p;
        if (first_floor || p < result.per_clause_floor) result.per_clause_floor = p;
        first_floor = false;
    }

    std::vector<int> rho_bits(static_cast<size_t>(n), -1);  // variable values
    std::vector<int> d1_order, d2_order;

    if (cfg.mode == AlgoMode::random) {
        SplitMix64 rng(cfg.seed);
        for (int v = 0; v < n; ++v) rho_bits[static_cast<size_t>(v)] = static_cast<int>(rng.below(2));
        for (int v = 0; v < n; ++v)
            if (inst.start.bits[static_cast<size_t>(v)] != rho_bits[static_cast<size_t>(v)])
                d1_order.push_back(v);
        rng.shuffle(d1_order);
        for (int v = 0; v < n; ++v)
            if (rho_bits[static_cast<size_t>(v)] != inst.end.bits[static_cast<size_t>(v)])
                d2_order.push_back(v);
        rng.shuffle(d2_order);
    } else {
        result.estimator_root = root_sum / m;

        // Conditional survival per clause under the partially pinned rho.
        std::vector<Rat> cond(static_cast<size_t>(m));
        Rat estimator = root_sum;
        auto clause_cond = [&](const ClauseState& cs) {
            std::vector<int> rt(cs.vars.size(), -1);
            for (size_t t = 0; t < cs.vars.size(); ++t) {
                int rv = rho_bits[static_cast<size_t>(cs.vars[t])];
                if (rv >= 0) rt[t] = (rv == cs.lit_pos[t]) ? 1 : 0;
            }
            return clause_cond_survival(cs.s_true, cs.e_true, rt);
        };
        for (int j = 0; j < m; ++j)
            cond[static_cast<size_t>(j)] = clause_survival_prob(
                k, clauses[static_cast<size_t>(j)].s_true, clauses[static_cast<size_t>(j)].e_true);

        // Stage 1: pin rho bit by bit.
        for (int v = 0; v < n; ++v) {
            Rat delta[2];
            for (int bit = 0; bit < 2; ++bit) {
                rho_bits[static_cast<size_t>(v)] = bit;
                Rat d = 0;
                for (auto [j, t] : var_clauses[static_cast<size_t>(v)])
                    d += clause_cond(clauses[static_cast<size_t>(j)]) - cond[static_cast<size_t>(j)];
                delta[bit] = d;
            }
            int chosen = delta[1] > delta[0] ? 1 : 0;
            if (delta[chosen] < 0) throw std::logic_error("estimator decreased at a rho decision");
            rho_bits[static_cast<size_t>(v)] = chosen;
            estimator += delta[chosen];
            for (auto [j, t] : var_clauses[static_cast<size_t>(v)])
                cond[static_cast<size_t>(j)] = clause_cond(clauses[static_cast<size_t>(j)]);
        }

        // Initialize leg bookkeeping from the pinned rho.
        for (auto& cs : clauses) {
            for (size_t t = 0; t < cs.vars.size(); ++t) {
                bool rho_true =
                    rho_bits[static_cast<size_t>(cs.vars[t])] == static_cast<int>(cs.lit_pos[t]);
                if (cs.s_true[t] && rho_true) cs.safe1 = true;
                if (cs.s_true[t] && !rho_true) ++cs.a1_rem;
                if (!cs.s_true[t] && rho_true) ++cs.u1_rem;
                if (cs.e_true[t] && rho_true) cs.safe2 = true;
                if (!cs.e_true[t] && rho_true) ++cs.a2_rem;
                if (cs.e_true[t] && !rho_true) ++cs.u2_rem;
            }
            cs.s2_fixed = cs.s2_state();
        }

        // Stage 2: leg-1 flip order, greedy next variable first.
        std::vector<int> remaining;
        for (int v = 0; v < n; ++v)
            if (inst.start.bits[static_cast<size_t>(v)] != rho_bits[static_cast<size_t>(v)])
                remaining.push_back(v);
        auto leg1_after_flip = [&](ClauseState& cs, int t) {
            bool down = cs.s_true[static_cast<size_t>(t)];
            bool safe = cs.safe1, failed = cs.failed1;
            int a = cs.a1_rem, u = cs.u1_rem;
            if (down) {
                --a;
                if (!safe && a == 0) failed = true;
            } else {
                --u;
                if (!failed) safe = true;
            }
            if (failed) return Rat(0);
            if (safe) return Rat(1);
            return Rat(1) - order_failure(a, u);
        };
        while (!remaining.empty()) {
            int best_v = -1;
            Rat best_delta;
            for (int v : remaining) {
                Rat d = 0;
                for (auto [j, t] : var_clauses[static_cast<size_t>(v)]) {
                    ClauseState& cs = clauses[static_cast<size_t>(j)];
                    d += (leg1_after_flip(cs, t) - cs.s1_state()) * cs.s2_fixed;
                }
                if (best_v < 0 || d > best_delta) {
                    best_v = v;
                    best_delta = d;
                }
            }
            if (best_delta < 0) throw std::logic_error("estimator decreased at a leg-1 decision");
            for (auto [j, t] : var_clauses[static_cast<size_t>(best_v)]) {
                ClauseState& cs = clauses[static_cast<size_t>(j)];
                if (cs.s_true[static_cast<size_t>(t)]) {
                    --cs.a1_rem;
                    if (!cs.safe1 && cs.a1_rem == 0) cs.failed1 = true;
                } else {
                    --cs.u1_rem;
                    if (!cs.failed1) cs.safe1 = true;
                }
            }
            d1_order.push_back(best_v);
            remaining.erase(std::find(remaining.begin(), remaining.end(), best_v));
        }
        for (auto& cs : clauses) cs.s1_final = cs.failed1 ? 0 : 1;

        // Stage 3: leg-2 flip order. Literal truth flips relative to rho.
        remaining.clear();
        for (int v = 0; v < n; ++v)
            if (rho_bits[static_cast<size_t>(v)] != inst.end.bits[static_cast<size_t>(v)])
                remaining.push_back(v);
        auto leg2_after_flip = [&](ClauseState& cs, int t) {
            bool down = !cs.e_true[static_cast<size_t>(t)];  // rho-true, end-false
            bool safe = cs.safe2, failed = cs.failed2;
            int a = cs.a2_rem, u = cs.u2_rem;
            if (down) {
                --a;
                if (!safe && a == 0) failed = true;
            } else {
                --u;
                if (!failed) safe = true;
            }
            if (failed) return Rat(0);
            if (safe) return Rat(1);
            return Rat(1) - order_failure(a, u);
        };
        while (!remaining.empty()) {
            int best_v = -1;
            Rat best_delta;
            for (int v : remaining) {
                Rat d = 0;
                for (auto [j, t] : var_clauses[static_cast<size_t>(v)]) {
                    ClauseState& cs = clauses[static_cast<size_t>(j)];
                    if (cs.s1_final == 0) continue;
                    d += leg2_after_flip(cs, t) - cs.s2_state();
                }
                if (best_v < 0 || d > best_delta) {
                    best_v = v;
                    best_delta = d;
                }
            }
            if (best_delta < 0) throw std::logic_error("estimator decreased at a leg-2 decision");
            for (auto [j, t] : var_clauses[static_cast<size_t>(best_v)]) {
                ClauseState& cs = clauses[static_cast<size_t>(j)];
                if (!cs.e_true[static_cast<size_t>(t)]) {
                    --cs.a2_rem;
                    if (!cs.safe2 && cs.a2_rem == 0) cs.failed2 = true;
                } else {
                    --cs.u2_rem;
                    if (!cs.failed2) cs.safe2 = true;
                }
            }
            d2_order.push_back(best_v);
            remaining.erase(std::find(remaining.begin(), remaining.end(), best_v));
        }
    }

    // Emit start -> rho -> end.
    SatSequence seq;
    Assignment cur = inst.start;
    seq.steps.push_back(cur);
    for (int v : d1_order) {
        cur.bits[static_cast<size_t>(v)] ^= 1;
        seq.steps.push_back(cur);
    }
    for (int v : d2_order) {
        cur.bits[static_cast<size_t>(v)] ^= 1;
        seq.steps.push_back(cur);
    }
    validate_sequence(inst, seq);
    result.achieved = sequence_value(inst, seq);
    result.sequence = std::move(seq);
    return result;
}

}  // namespace reconfig
