#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "reconfig/approx_sat.hpp"
#include "reconfig/exact_solver.hpp"
#include "reconfig/prng.hpp"
#include "reconfig/reductions.hpp"
#include "reconfig/valuation.hpp"

using namespace reconfig;

namespace {

Int fact(int n) {
    Int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Oracle: enumerate every rho restricted to the clause's variables and every
// pair of flip orders; count sequences that keep at least one literal true.
Rat clause_survival_bruteforce(int k, const std::vector<std::uint8_t>& s_true,
                               const std::vector<std::uint8_t>& e_true) {
    Rat total = 0;
    for (int rho = 0; rho < (1 << k); ++rho) {
        std::vector<int> d1, d2;
        for (int i = 0; i < k; ++i) {
            bool r = (rho >> i) & 1;
            if (s_true[static_cast<size_t>(i)] != r) d1.push_back(i);
            if (r != (e_true[static_cast<size_t>(i)] != 0)) d2.push_back(i);
        }
        auto leg_survivals = [&](std::vector<int> flips, std::vector<std::uint8_t> state) {
            // Returns (#orders surviving, #orders) for one leg from `state`.
            std::sort(flips.begin(), flips.end());
            long good = 0, count = 0;
            do {
                ++count;
                auto cur = state;
                bool ok = std::any_of(cur.begin(), cur.end(), [](std::uint8_t b) { return b; });
                for (int i : flips) {
                    cur[static_cast<size_t>(i)] ^= 1;
                    ok = ok && std::any_of(cur.begin(), cur.end(),
                                           [](std::uint8_t b) { return b; });
                }
                good += ok;
            } while (std::next_permutation(flips.begin(), flips.end()));
            return std::make_pair(good, count);
        };
        std::vector<std::uint8_t> rho_state(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) rho_state[static_cast<size_t>(i)] = (rho >> i) & 1;
        auto [g1, c1] = leg_survivals(d1, s_true);
        auto [g2, c2] = leg_survivals(d2, rho_state);
        total += Rat(g1, c1) * Rat(g2, c2);
    }
    return total / (1 << k);
}

std::vector<std::uint8_t> bits_of(int mask, int k) {
    std::vector<std::uint8_t> v(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) v[static_cast<size_t>(i)] = (mask >> i) & 1;
    return v;
}

}  // namespace

TEST_CASE("binomial sums match their closed forms and direct summation") {
    CHECK(binom_sum(2, 1) == Rat(7, 3));
    CHECK(binom_sum(0, 2) == Rat(1, 2));
    for (int n = 0; n <= 12; ++n) {
        Rat direct1 = 0, direct2 = 0;
        for (int j = 0; j <= n; ++j) {
            Int c = fact(n) / (fact(j) * fact(n - j));
            direct1 += Rat(c, j + 1);
            direct2 += Rat(c, j + 2);
        }
        CHECK(binom_sum(n, 1) == direct1);
        CHECK(binom_sum(n, 2) == direct2);
        CHECK(binom_sum(n, 1) == Rat((Int(1) << (n + 1)) - 1, n + 1));
        CHECK(binom_sum(n, 2) == Rat((Int(1) << (n + 1)) * n + 1, Int(n + 1) * (n + 2)));
    }
}

TEST_CASE("k=3 single-literal survival values are exact") {
    // Start true only at the 3rd literal, end true only at the 2nd.
    std::vector<std::uint8_t> s = {0, 0, 1}, e = {0, 1, 0};
    CHECK(clause_survival_prob(3, s, e) == Rat(55, 96));
    CHECK(clause_survival_bruteforce(3, s, e) == Rat(55, 96));
    // Same single true literal on both sides.
    CHECK(clause_survival_prob(3, s, s) == Rat(89, 144));
    CHECK(clause_survival_bruteforce(3, s, s) == Rat(89, 144));
}

TEST_CASE("closed computation matches the brute-force oracle exhaustively at k=3,4") {
    for (int k = 3; k <= 4; ++k)
        for (int sm = 1; sm < (1 << k); ++sm)
            for (int em = 1; em < (1 << k); ++em) {
                auto s = bits_of(sm, k), e = bits_of(em, k);
                CHECK(clause_survival_prob(k, s, e) == clause_survival_bruteforce(k, s, e));
            }
}

TEST_CASE("survival floor 1 - 1/(k-1) - 1/k holds exhaustively at k=3,4") {
    for (int k = 3; k <= 4; ++k) {
        Rat floor = Rat(1) - Rat(1, k - 1) - Rat(1, k);
        for (int sm = 1; sm < (1 << k); ++sm)
            for (int em = 1; em < (1 << k); ++em)
                CHECK(clause_survival_prob(k, bits_of(sm, k), bits_of(em, k)) >= floor);
    }
}

TEST_CASE("raising a true literal never decreases survival (k=3,4)") {
    for (int k = 3; k <= 4; ++k)
        for (int sm = 1; sm < (1 << k); ++sm)
            for (int em = 1; em < (1 << k); ++em) {
                Rat base = clause_survival_prob(k, bits_of(sm, k), bits_of(em, k));
                for (int i = 0; i < k; ++i) {
                    if (!((sm >> i) & 1))
                        CHECK(clause_survival_prob(k, bits_of(sm | (1 << i), k), bits_of(em, k)) >=
                              base);
                    if (!((em >> i) & 1))
                        CHECK(clause_survival_prob(k, bits_of(sm, k), bits_of(em | (1 << i), k)) >=
                              base);
                }
            }
}

TEST_CASE("all-true endpoints dominate the single-literal case") {
    std::vector<std::uint8_t> all(3, 1);
    CHECK(clause_survival_prob(3, all, all) >= Rat(55, 96));
}

TEST_CASE("survival minimum matches the k=3..10 factor table to 3 decimals") {
    // The published factors are the exact minima truncated to 3 decimals.
    std::vector<int> table = {572, 631, 679, 718, 749, 775, 796, 814};
    for (int k = 3; k <= 10; ++k) {
        Rat best = 1;
        for (int a = 0; a <= k; ++a)
            for (int b = 0; a + b <= k; ++b)
                for (int c = (a == 0 || b == 0) ? 1 : 0; a + b + c <= k; ++c) {
                    if (a + c == 0 || b + c == 0) continue;
                    std::vector<std::uint8_t> s(static_cast<size_t>(k), 0),
                        e(static_cast<size_t>(k), 0);
                    for (int i = 0; i < a + c; ++i) s[static_cast<size_t>(i)] = 1;
                    for (int i = a; i < a + b + c; ++i) e[static_cast<size_t>(i)] = 1;
                    best = std::min(best, clause_survival_prob(k, s, e));
                }
        Int truncated = (rat_num(best) * 1000) / rat_den(best);
        CHECK(truncated == table[static_cast<size_t>(k - 3)]);
    }
}

TEST_CASE("horn example 6 run meets its bounds") {
    auto inst = horn_example(6);
    SatAlgoConfig cfg;
    auto res = approx_sat_reconfig(inst, cfg);
    CHECK(res.achieved >= Rat(1) - Rat(1, 2) - Rat(1, 3));
    CHECK(res.achieved >= Rat(55, 96));  // per-clause floor dominates here
    CHECK(res.per_clause_floor >= Rat(55, 96));
    auto exact = opt_sat_exact(inst, 1 << 10);
    CHECK(res.achieved <= exact.opt);
    REQUIRE(res.estimator_root.has_value());
    CHECK(res.achieved >= *res.estimator_root);
}

TEST_CASE("start equals end stays above the bound") {
    auto inst = horn_example(6);
    inst.end = inst.start;
    SatAlgoConfig cfg;
    auto res = approx_sat_reconfig(inst, cfg);
    CHECK(res.achieved >= res.guarantee_bound);
    CHECK(res.sequence.steps.front().bits == inst.start.bits);
    CHECK(res.sequence.steps.back().bits == inst.end.bits);
}

TEST_CASE("random satisfiable E5 stays above 1 - 2.5/5") {
    SplitMix64 rng(9);
    SatReconfigInstance inst;
    inst.formula.n = 20;
    inst.formula.k = 5;
    auto rand_assignment = [&] {
        Assignment a;
        for (int i = 0; i < 20; ++i) a.bits.push_back(static_cast<std::uint8_t>(rng.below(2)));
        return a;
    };
    inst.start = rand_assignment();
    inst.end = rand_assignment();
    while (inst.formula.m() < 60) {
        std::vector<int> vars(20);
        std::iota(vars.begin(), vars.end(), 1);
        for (int i = 0; i < 5; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.below(20 - i));
            std::swap(vars[static_cast<size_t>(i)], vars[j]);
        }
        std::vector<int> clause;
        for (int i = 0; i < 5; ++i)
            clause.push_back(rng.below(2) ? vars[static_cast<size_t>(i)]
                                          : -vars[static_cast<size_t>(i)]);
        if (clause_satisfied(clause, inst.start) && clause_satisfied(clause, inst.end))
            inst.formula.clauses.push_back(clause);
    }
    SatAlgoConfig cfg;
    auto res = approx_sat_reconfig(inst, cfg);
    CHECK(res.achieved >= Rat(1, 2));
    CHECK(res.achieved >= *res.estimator_root);
}

TEST_CASE("random mode is seed reproducible") {
    auto inst = horn_example(6);
    SatAlgoConfig cfg;
    cfg.mode = AlgoMode::random;
    cfg.seed = 7;
    auto a = approx_sat_reconfig(inst, cfg);
    auto b = approx_sat_reconfig(inst, cfg);
    CHECK(serialize_sequence(a.sequence) == serialize_sequence(b.sequence));
    CHECK(a.achieved == b.achieved);
}

TEST_CASE("rejects bad inputs") {
    auto inst = horn_example(6);
    inst.formula.k = 0;  // mixed width
    SatAlgoConfig cfg;
    CHECK_THROWS_AS(approx_sat_reconfig(inst, cfg), ValidationError);

    auto inst2 = horn_example(6);
    inst2.start.bits[0] = 1;
    inst2.start.bits[1] = 1;  // weight-2 assignments violate some Horn clause
    CHECK_THROWS_WITH_AS(approx_sat_reconfig(inst2, cfg), doctest::Contains("clause"),
                         ValidationError);

    std::vector<std::uint8_t> none(3, 0), some(3, 1);
    CHECK_THROWS_AS(clause_survival_prob(3, none, some), ValidationError);
}
