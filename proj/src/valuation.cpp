#include "reconfig/valuation.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace reconfig {

Rat cut_value(const WeightedMultigraph& g, const Coloring& f) {
    if (f.n() != g.n) throw ValidationError("coloring length differs from vertex count");
    if (g.edges.empty()) throw ValidationError("cut value undefined on an empty edge list");
    Rat bichromatic = 0;
    for (const auto& e : g.edges)
        if (f.colors[static_cast<size_t>(e.u - 1)] != f.colors[static_cast<size_t>(e.v - 1)])
            bichromatic += e.w;
    return bichromatic / g.total_weight();
}

Rat sat_value(const CnfFormula& formula, const Assignment& a) {
    if (a.n() != formula.n) throw ValidationError("assignment length differs from variable count");
    if (formula.clauses.empty()) throw ValidationError("sat value undefined on an empty formula");
    long satisfied = 0;
    for (const auto& cl : formula.clauses) satisfied += clause_satisfied(cl, a);
    return Rat(satisfied, formula.m());
}

Rat sequence_value(const CutReconfigInstance& inst, const CutSequence& seq) {
    validate_sequence(inst, seq);
    Rat best;
    bool first = true;
    for (const auto& step : seq.steps) {
        Rat v = cut_value(inst.graph, step);
        if (first || v < best) best = v;
        first = false;
    }
    return best;
}

Rat sequence_value(const SatReconfigInstance& inst, const SatSequence& seq) {
    validate_sequence(inst, seq);
    Rat best;
    bool first = true;
    for (const auto& step : seq.steps) {
        Rat v = sat_value(inst.formula, step);
        if (first || v < best) best = v;
        first = false;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Grids

GridColoring GridColoring::horizontally_striped(int k, const std::vector<int>& sigma) {
    GridColoring g;
    g.k = k;
    g.cells.resize(static_cast<size_t>(k) * k);
    for (int y = 1; y <= k; ++y)
        for (int x = 1; x <= k; ++x) g.at(x, y) = sigma[static_cast<size_t>(y - 1)];
    return g;
}

GridColoring GridColoring::vertically_striped(int k, const std::vector<int>& sigma) {
    GridColoring g;
    g.k = k;
    g.cells.resize(static_cast<size_t>(k) * k);
    for (int y = 1; y <= k; ++y)
        for (int x = 1; x <= k; ++x) g.at(x, y) = sigma[static_cast<size_t>(x - 1)];
    return g;
}

GridColoring GridColoring::transposed() const {
    GridColoring g;
    g.k = k;
    g.cells.resize(cells.size());
    for (int y = 1; y <= k; ++y)
        for (int x = 1; x <= k; ++x) g.at(x, y) = at(y, x);
    return g;
}

Coloring GridColoring::flatten() const {
    Coloring c;
    c.k = k;
    c.colors = cells;
    return c;
}

void GridColoring::validate() const {
    if (k < 1) throw ValidationError("grid side must be positive");
    if (cells.size() != static_cast<size_t>(k) * k) throw ValidationError("grid cell count mismatch");
    for (int c : cells)
        if (c < 1 || c > k) throw ValidationError("grid cell color out of range");
}

// Standard O(n^3) Hungarian algorithm with potentials.
std::vector<int> solve_assignment(const std::vector<std::vector<long long>>& cost) {
    int n = static_cast<int>(cost.size());
    const long long INF = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> u(static_cast<size_t>(n) + 1), v(static_cast<size_t>(n) + 1);
    std::vector<int> p(static_cast<size_t>(n) + 1), way(static_cast<size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<long long> minv(static_cast<size_t>(n) + 1, INF);
        std::vector<char> used(static_cast<size_t>(n) + 1, false);
        do {
            used[static_cast<size_t>(j0)] = true;
            int i0 = p[static_cast<size_t>(j0)], j1 = -1;
            long long delta = INF;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                long long cur = cost[static_cast<size_t>(i0 - 1)][static_cast<size_t>(j - 1)] -
                                u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<size_t>(j0)];
            p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> match(static_cast<size_t>(n));  // row -> column, 0-based
    for (int j = 1; j <= n; ++j) match[static_cast<size_t>(p[static_cast<size_t>(j)] - 1)] = j - 1;
    return match;
}

namespace {

// counts[i][c]: occurrences of color c+1 in row i+1 (by_row) or column i+1.
std::vector<std::vector<long long>> color_counts(const GridColoring& g, bool by_row) {
    std::vector<std::vector<long long>> counts(static_cast<size_t>(g.k),
                                               std::vector<long long>(static_cast<size_t>(g.k), 0));
    for (int y = 1; y <= g.k; ++y)
        for (int x = 1; x <= g.k; ++x) {
            int idx = by_row ? y : x;
            ++counts[static_cast<size_t>(idx - 1)][static_cast<size_t>(g.at(x, y) - 1)];
        }
    return counts;
}

// Distance to the striped set for one orientation: assign a distinct color to
// each line, minimizing total mismatches (k - count) per line.
std::pair<Rat, std::vector<int>> striped_distance(const GridColoring& g, bool by_row) {
    auto counts = color_counts(g, by_row);
    std::vector<std::vector<long long>> cost(static_cast<size_t>(g.k),
                                             std::vector<long long>(static_cast<size_t>(g.k)));
    for (int i = 0; i < g.k; ++i)
        for (int c = 0; c < g.k; ++c)
            cost[static_cast<size_t>(i)][static_cast<size_t>(c)] =
                g.k - counts[static_cast<size_t>(i)][static_cast<size_t>(c)];
    auto match = solve_assignment(cost);
    long long total = 0;
    std::vector<int> sigma(static_cast<size_t>(g.k));
    for (int i = 0; i < g.k; ++i) {
        total += cost[static_cast<size_t>(i)][static_cast<size_t>(match[static_cast<size_t>(i)])];
        sigma[static_cast<size_t>(i)] = match[static_cast<size_t>(i)] + 1;
    }
    return {Rat(total, static_cast<long long>(g.k) * g.k), sigma};
}

}  // namespace

StripeReport stripe_report(const GridColoring& g) {
    g.validate();
    if (g.k < 2) throw ValidationError("stripe report needs k >= 2");
    auto [dh, sigma_h] = striped_distance(g, /*by_row=*/true);
    auto [dv, sigma_v] = striped_distance(g, /*by_row=*/false);
    StripeReport r;
    r.dist_h = dh;
    r.dist_v = dv;
    r.dec = (dh <= dv) ? 1 : 2;
    r.eps = (r.dec == 1) ? dh : dv;
    r.sigma = (r.dec == 1) ? sigma_h : sigma_v;
    return r;
}

Rat stripe_reject_prob(const GridColoring& g) {
    g.validate();
    if (g.k < 2) throw ValidationError("stripe test needs k >= 2");
    long long k = g.k;
    // Quadruples with X1 != X2 and Y1 != Y2 whose two cells share color a:
    // |S_a|^2 - sum_x C_{x,a}^2 - sum_y R_{y,a}^2 + |S_a| by inclusion-exclusion.
    auto rows = color_counts(g, true);
    auto cols = color_counts(g, false);
    std::vector<long long> size(static_cast<size_t>(k), 0);
    for (int c : g.cells) ++size[static_cast<size_t>(c - 1)];
    Int mono = 0;
    for (int a = 0; a < g.k; ++a) {
        Int s = size[static_cast<size_t>(a)];
        Int term = s * s + s;
        for (int i = 0; i < g.k; ++i) {
            long long r = rows[static_cast<size_t>(i)][static_cast<size_t>(a)];
            long long c = cols[static_cast<size_t>(i)][static_cast<size_t>(a)];
            term -= Int(r) * r + Int(c) * c;
        }
        mono += term;
    }
    Int valid = Int(k) * k * (k - 1) * (k - 1);
    return Rat(mono, valid);
}

Rat tester_accept_prob(const PairTester& t, const Coloring& cfg) {
    if (cfg.n() < t.positions) throw ValidationError("configuration shorter than tester support");
    Rat accept = 0;
    for (const auto& e : t.pairs)
        if (cfg.colors[static_cast<size_t>(e.i - 1)] != cfg.colors[static_cast<size_t>(e.j - 1)])
            accept += e.p;
    return accept;
}

Rat explicit_verifier_accept_prob(const ExplicitVerifier& v, const Assignment& proof) {
    if (proof.n() != v.proof_len) throw ValidationError("proof length mismatch");
    if (v.checks.empty()) throw ValidationError("verifier with no checks");
    long accepted = 0;
    for (const auto& c : v.checks) {
        std::uint32_t view = 0;
        for (size_t t = 0; t < c.queries.size(); ++t)
            if (proof.bits[static_cast<size_t>(c.queries[t] - 1)]) view |= (1u << t);
        accepted += std::binary_search(c.accepted.begin(), c.accepted.end(), view);
    }
    return Rat(accepted, static_cast<long>(v.checks.size()));
}

std::vector<GridColoring> parse_grids(std::string_view text) {
    std::vector<GridColoring> grids;
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    GridColoring current;
    int rows_left = 0;
    while (std::getline(in, raw)) {
        ++number;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "grid") {
            if (rows_left > 0) throw ParseError("line " + std::to_string(number) + ": previous grid incomplete");
            int k = 0;
            if (!(ls >> k) || k < 1) throw ParseError("line " + std::to_string(number) + ": expected 'grid <k>'");
            current = GridColoring{};
            current.k = k;
            rows_left = k;
        } else {
            if (rows_left == 0) throw ParseError("line " + std::to_string(number) + ": row outside a grid block");
            std::istringstream row(raw);
            int c = 0;
            std::vector<int> vals;
            while (row >> c) vals.push_back(c);
            if (static_cast<int>(vals.size()) != current.k)
                throw ParseError("line " + std::to_string(number) + ": expected " +
                                 std::to_string(current.k) + " colors");
            for (int val : vals) current.cells.push_back(val);
            if (--rows_left == 0) {
                current.validate();
                grids.push_back(current);
            }
        }
    }
    if (rows_left > 0) throw ParseError("grid block incomplete at end of file");
    if (grids.empty()) throw ParseError("no grids in file");
    return grids;
}

std::string serialize_grids(const std::vector<GridColoring>& grids) {
    std::ostringstream out;
    for (const auto& g : grids) {
        out << "grid " << g.k << "\n";
        for (int y = 1; y <= g.k; ++y) {
            for (int x = 1; x <= g.k; ++x) out << (x > 1 ? " " : "") << g.at(x, y);
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace reconfig
