#include "reconfig/exact_solver.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <thread>

#include "reconfig/valuation.hpp"

namespace reconfig {

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::uint64_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

void parallel_for(std::uint64_t count, int threads, const std::function<void(std::uint64_t, std::uint64_t)>& chunk) {
    if (threads <= 1 || count < 1024) {
        chunk(0, count);
        return;
    }
    std::vector<std::thread> pool;
    std::uint64_t per = (count + threads - 1) / static_cast<std::uint64_t>(threads);
    for (int t = 0; t < threads; ++t) {
        std::uint64_t lo = static_cast<std::uint64_t>(t) * per;
        std::uint64_t hi = std::min(count, lo + per);
        if (lo >= hi) break;
        pool.emplace_back(chunk, lo, hi);
    }
    for (auto& th : pool) th.join();
}

// Shared bottleneck search over an abstract configuration space. The space
// supplies exact integer scores (value numerators over a common denominator),
// single-site neighbor enumeration, and endpoint ids.
template <class Space>
struct BottleneckSearch {
    const Space& space;
    std::uint64_t count;

    // {opt_score, bfs parent chain from start to end within score >= opt}
    std::pair<Int, std::vector<std::uint32_t>> run(std::uint32_t start, std::uint32_t end,
                                                   const std::vector<Int>& score) {
        std::vector<std::uint32_t> order(count);
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return score[a] > score[b];
        });

        UnionFind uf(count);
        std::vector<char> active(count, 0);
        Int opt_score = -1;
        for (std::uint32_t idx : order) {
            active[idx] = 1;
            space.for_each_neighbor(idx, [&](std::uint32_t nb) {
                if (active[nb]) uf.unite(idx, nb);
            });
            if (active[start] && active[end] && uf.find(start) == uf.find(end)) {
                opt_score = score[idx];
                break;
            }
        }

        // BFS within the sublevel set of score >= opt for a shortest witness.
        std::vector<std::uint32_t> parent(count, UINT32_MAX);
        std::deque<std::uint32_t> queue;
        parent[start] = start;
        queue.push_back(start);
        while (!queue.empty()) {
            std::uint32_t cur = queue.front();
            queue.pop_front();
            if (cur == end) break;
            space.for_each_neighbor(cur, [&](std::uint32_t nb) {
                if (parent[nb] == UINT32_MAX && score[nb] >= opt_score) {
                    parent[nb] = cur;
                    queue.push_back(nb);
                }
            });
        }
        std::vector<std::uint32_t> path;
        for (std::uint32_t cur = end;; cur = parent[cur]) {
            path.push_back(cur);
            if (cur == start) break;
        }
        std::reverse(path.begin(), path.end());
        return {opt_score, path};
    }
};

struct CutSpace {
    const CutReconfigInstance& inst;
    std::uint64_t count;
    std::vector<std::uint64_t> radix;  // radix[i] = k^i

    explicit CutSpace(const CutReconfigInstance& i) : inst(i) {
        radix.resize(static_cast<size_t>(inst.graph.n));
        std::uint64_t r = 1;
        for (int v = 0; v < inst.graph.n; ++v) {
            radix[static_cast<size_t>(v)] = r;
            r *= static_cast<std::uint64_t>(inst.k);
        }
        count = r;
    }

    std::uint32_t encode(const Coloring& c) const {
        std::uint64_t idx = 0;
        for (int v = 0; v < inst.graph.n; ++v)
            idx += static_cast<std::uint64_t>(c.colors[static_cast<size_t>(v)] - 1) *
                   radix[static_cast<size_t>(v)];
        return static_cast<std::uint32_t>(idx);
    }

    Coloring decode(std::uint32_t idx) const {
        Coloring c;
        c.k = inst.k;
        c.colors.resize(static_cast<size_t>(inst.graph.n));
        std::uint64_t rest = idx;
        for (int v = 0; v < inst.graph.n; ++v) {
            c.colors[static_cast<size_t>(v)] = static_cast<int>(rest % inst.k) + 1;
            rest /= static_cast<std::uint64_t>(inst.k);
        }
        return c;
    }

    template <class F>
    void for_each_neighbor(std::uint32_t idx, F&& f) const {
        for (int v = 0; v < inst.graph.n; ++v) {
            std::uint64_t r = radix[static_cast<size_t>(v)];
            std::uint64_t digit = (idx / r) % static_cast<std::uint64_t>(inst.k);
            for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(inst.k); ++c)
                if (c != digit) f(static_cast<std::uint32_t>(idx + (c - digit) * r));
        }
    }
};

struct SatSpace {
    const SatReconfigInstance& inst;
    std::uint64_t count;

    explicit SatSpace(const SatReconfigInstance& i)
        : inst(i), count(1ull << inst.formula.n) {}

    std::uint32_t encode(const Assignment& a) const {
        std::uint64_t idx = 0;
        for (int v = 0; v < inst.formula.n; ++v)
            if (a.bits[static_cast<size_t>(v)]) idx |= (1ull << v);
        return static_cast<std::uint32_t>(idx);
    }

    Assignment decode(std::uint32_t idx) const {
        Assignment a;
        a.bits.resize(static_cast<size_t>(inst.formula.n));
        for (int v = 0; v < inst.formula.n; ++v)
            a.bits[static_cast<size_t>(v)] = (idx >> v) & 1u;
        return a;
    }

    template <class F>
    void for_each_neighbor(std::uint32_t idx, F&& f) const {
        for (int v = 0; v < inst.formula.n; ++v) f(static_cast<std::uint32_t>(idx ^ (1u << v)));
    }
};

}  // namespace

CutExactResult opt_cut_exact(const CutReconfigInstance& inst, std::uint64_t budget, int threads) {
    inst.validate();
    if (inst.graph.edges.empty()) throw ValidationError("exact solve needs a nonempty edge list");

    // k^n <= budget, checked without overflow.
    std::uint64_t count = 1;
    for (int v = 0; v < inst.graph.n; ++v) {
        if (count > budget / static_cast<std::uint64_t>(inst.k))
            throw BudgetError("configuration space k^n exceeds budget " + std::to_string(budget));
        count *= static_cast<std::uint64_t>(inst.k);
    }
    if (count > budget)
        throw BudgetError("configuration space k^n exceeds budget " + std::to_string(budget));
    if (count > UINT32_MAX)
        throw BudgetError("configuration space exceeds the 2^32 indexing limit");

    CutSpace space(inst);

    // Integer scores: edge weights scaled by the common denominator.
    Int lcm = 1;
    for (const auto& e : inst.graph.edges) lcm = boost::multiprecision::lcm(lcm, rat_den(e.w));
    std::vector<Int> scaled;
    Int denom = 0;
    for (const auto& e : inst.graph.edges) {
        scaled.push_back(rat_num(e.w) * (lcm / rat_den(e.w)));
        denom += scaled.back();
    }

    std::vector<Int> score(count);
    parallel_for(count, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            Coloring c = space.decode(static_cast<std::uint32_t>(idx));
            Int s = 0;
            for (size_t ei = 0; ei < inst.graph.edges.size(); ++ei) {
                const auto& e = inst.graph.edges[ei];
                if (c.colors[static_cast<size_t>(e.u - 1)] != c.colors[static_cast<size_t>(e.v - 1)])
                    s += scaled[ei];
            }
            score[idx] = std::move(s);
        }
    });

    BottleneckSearch<CutSpace> search{space, count};
    auto [opt_score, path] =
        search.run(space.encode(inst.start), space.encode(inst.end), score);

    CutExactResult result;
    result.opt = Rat(opt_score, denom);
    for (std::uint32_t idx : path) result.witness.steps.push_back(space.decode(idx));
    result.explored = count;
    return result;
}

SatExactResult opt_sat_exact(const SatReconfigInstance& inst, std::uint64_t budget, int threads) {
    inst.validate();
    if (inst.formula.clauses.empty()) throw ValidationError("exact solve needs a nonempty formula");
    if (inst.formula.n >= 63 || (1ull << inst.formula.n) > budget)
        throw BudgetError("configuration space 2^n exceeds budget " + std::to_string(budget));
    if ((1ull << inst.formula.n) > UINT32_MAX)
        throw BudgetError("configuration space exceeds the 2^32 indexing limit");

    SatSpace space(inst);
    std::uint64_t count = space.count;

    std::vector<Int> score(count);
    parallel_for(count, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            Assignment a = space.decode(static_cast<std::uint32_t>(idx));
            long satisfied = 0;
            for (const auto& cl : inst.formula.clauses) satisfied += clause_satisfied(cl, a);
            score[idx] = satisfied;
        }
    });

    BottleneckSearch<SatSpace> search{space, count};
    auto [opt_score, path] =
        search.run(space.encode(inst.start), space.encode(inst.end), score);

    SatExactResult result;
    result.opt = Rat(opt_score, inst.formula.m());
    for (std::uint32_t idx : path) result.witness.steps.push_back(space.decode(idx));
    result.explored = count;
    return result;
}

}  // namespace reconfig
