#include "reconfig/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "reconfig/valuation.hpp"

namespace reconfig {

std::string serialize_certificate(const ReductionCertificate& cert) {
    std::ostringstream out;
    out << "certificate " << cert.name << "\n";
    out << "input = " << cert.input_summary << "\n";
    out << "output = " << cert.output_summary << "\n";
    for (const auto& [key, value] : cert.params) out << "param " << key << " = " << value << "\n";
    for (const auto& w : cert.warnings) out << "warning " << w << "\n";
    if (cert.witness_value)
        out << "witness_value = " << rat_to_fraction_string(*cert.witness_value) << " ("
            << rat_to_decimal(*cert.witness_value) << ")\n";
    else
        out << "witness_value = none\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Testers

PairTester build_stripe_tester(int k) {
    if (k < 2) throw ValidationError("stripe tester needs k >= 2");
    PairTesterBuilder builder(k * k);
    Rat p(1, Int(k) * k * (k - 1) * (k - 1));
    auto pos = [k](int x, int y) { return (y - 1) * k + x; };
    for (int x1 = 1; x1 <= k; ++x1)
        for (int y1 = 1; y1 <= k; ++y1)
            for (int x2 = 1; x2 <= k; ++x2) {
                if (x2 == x1) continue;
                for (int y2 = 1; y2 <= k; ++y2) {
                    if (y2 == y1) continue;
                    builder.add(pos(x1, y1), pos(x2, y2), p);
                }
            }
    return std::move(builder).build();
}

PairTester build_consistency_tester(int k) {
    if (k < 2) throw ValidationError("consistency tester needs k >= 2");
    PairTesterBuilder builder(2 * k * k);
    auto posf = [k](int x, int y) { return (y - 1) * k + x; };
    auto posg = [k](int x, int y) { return k * k + (y - 1) * k + x; };
    Rat p(1, Int(2) * k * k * k * (k - 1));
    // Row test: y1 != y2; column test: x1 != x2. Each carries mass 1/2.
    for (int x1 = 1; x1 <= k; ++x1)
        for (int y1 = 1; y1 <= k; ++y1)
            for (int x2 = 1; x2 <= k; ++x2)
                for (int y2 = 1; y2 <= k; ++y2) {
                    if (y1 != y2) builder.add(posf(x1, y1), posg(x2, y2), p);
                    if (x1 != x2) builder.add(posf(x1, y1), posg(x2, y2), p);
                }
    return std::move(builder).build();
}

PairTester build_edge_tester(int k, const Rat& rho) {
    if (k < 2) throw ValidationError("edge tester needs k >= 2");
    if (rho <= 0 || rho > 1) throw ValidationError("edge tester needs rho in (0, 1]");
    Rat Z = Rat(4) / rho + 1;
    Rat w_stripe = Rat(2) / (rho * Z);
    Rat w_cons = Rat(1) / Z;
    PairTesterBuilder builder(2 * k * k);
    PairTester stripe = build_stripe_tester(k);
    for (const auto& e : stripe.pairs) {
        builder.add(e.i, e.j, e.p * w_stripe);                    // stripe test on f
        builder.add(k * k + e.i, k * k + e.j, e.p * w_stripe);    // stripe test on g
    }
    PairTester cons = build_consistency_tester(k);
    for (const auto& e : cons.pairs) builder.add(e.i, e.j, e.p * w_cons);
    return std::move(builder).build();
}

WeightedMultigraph tester_to_graph(const PairTester& t) {
    t.validate();
    WeightedMultigraph g;
    g.n = t.positions;
    for (const auto& e : t.pairs) g.edges.push_back({e.i, e.j, e.p});
    return g;
}

// ---------------------------------------------------------------------------
// 2-Cut -> k-Cut (edge verifier on striped encodings)

CutReduction reduce_2cut_to_kcut(const CutReconfigInstance& inst, int k_target, const Rat& rho,
                                 const Rat& eps_c, const Rat& eps_s) {
    inst.validate();
    if (inst.k != 2) throw ValidationError("reduction expects a 2-coloring input");
    if (k_target < 3) throw ValidationError("reduction needs k_target >= 3");
    if (inst.graph.edges.empty()) throw ValidationError("reduction needs a nonempty edge list");

    int k = k_target;
    int kk = k * k;
    int n = inst.graph.n;
    PairTester tester = build_edge_tester(k, rho);
    Rat W = inst.graph.total_weight();

    // Tester position -> H vertex. f block reads f'(v) directly; g block reads
    // f'(w) transposed, so g-position (x, y) touches w's cell (y, x).
    auto map_pos = [&](int p, int v, int w) {
        if (p <= kk) return (v - 1) * kk + p;
        int pg = p - kk - 1;  // 0-based within the g block
        int x = pg % k + 1, y = pg / k + 1;
        return (w - 1) * kk + (x - 1) * k + y;
    };

    std::map<std::pair<int, int>, Rat> acc;
    for (const auto& e : inst.graph.edges) {
        Rat scale = e.w / W;
        for (const auto& pe : tester.pairs) {
            int a = map_pos(pe.i, e.u, e.v);
            int b = map_pos(pe.j, e.u, e.v);
            if (a > b) std::swap(a, b);
            acc[{a, b}] += pe.p * scale;
        }
    }

    CutReduction red;
    red.instance.k = k;
    red.instance.graph.n = n * kk;
    for (auto& [key, w] : acc) red.instance.graph.edges.push_back({key.first, key.second, w});

    auto encode = [&](const Coloring& f) {
        Coloring out;
        out.k = k;
        out.colors.resize(static_cast<size_t>(n) * kk);
        for (int v = 1; v <= n; ++v)
            for (int y = 1; y <= k; ++y)
                for (int x = 1; x <= k; ++x)
                    out.colors[static_cast<size_t>((v - 1) * kk + (y - 1) * k + x - 1)] =
                        f.colors[static_cast<size_t>(v - 1)] == 1 ? y : x;
        return out;
    };
    red.instance.start = encode(inst.start);
    red.instance.end = encode(inst.end);
    red.instance.validate();

    Rat Z = Rat(4) / rho + 1;
    Rat delta_c = (Rat(1) + (eps_c + eps_s) / 2) / (2 * Z);
    Rat delta_s = (Rat(1) + eps_s) / (2 * Z);
    auto& cert = red.certificate;
    cert.name = "crazy";
    cert.input_summary = "2-cut reconfiguration, n=" + std::to_string(n) +
                         ", m=" + std::to_string(inst.graph.edges.size());
    cert.output_summary = std::to_string(k) + "-cut reconfiguration, n=" +
                          std::to_string(red.instance.graph.n) +
                          ", m=" + std::to_string(red.instance.graph.edges.size());
    cert.params = {{"k", std::to_string(k)},
                   {"rho", rat_to_string(rho)},
                   {"Z", rat_to_string(Z)},
                   {"eps_c", rat_to_string(eps_c)},
                   {"eps_s", rat_to_string(eps_s)},
                   {"delta_c", rat_to_string(delta_c)},
                   {"delta_s", rat_to_string(delta_s)}};
    if (k < 1000)
        cert.warnings.push_back("soundness constants are proven only for k >= 1000");
    {
        auto deg = inst.graph.entry_degrees();
        int max_deg = *std::max_element(deg.begin(), deg.end());
        // Completeness bound needs |E| > 4*Delta*Z*k/(eps_s - eps_c).
        if (eps_s <= eps_c ||
            Rat(static_cast<long>(inst.graph.edges.size())) <=
                Rat(4 * max_deg) * Z * k / (eps_s - eps_c))
            cert.warnings.push_back("completeness delta_c bound not applicable at this size");
    }

    // Direct-path witness: recolor the blocks of differing vertices cell by cell.
    std::uint64_t step_bound = 0;
    for (int v = 1; v <= n; ++v)
        if (inst.start.colors[static_cast<size_t>(v - 1)] != inst.end.colors[static_cast<size_t>(v - 1)])
            step_bound += static_cast<std::uint64_t>(kk);
    if ((step_bound + 1) * red.instance.graph.edges.size() <= 50000000ull) {
        CutSequence wit;
        Coloring cur = red.instance.start;
        wit.steps.push_back(cur);
        for (int v = 1; v <= n; ++v) {
            for (int cell = 0; cell < kk; ++cell) {
                size_t idx = static_cast<size_t>((v - 1) * kk + cell);
                int target = red.instance.end.colors[idx];
                if (cur.colors[idx] != target) {
                    cur.colors[idx] = target;
                    wit.steps.push_back(cur);
                }
            }
        }
        red.certificate.witness_value = sequence_value(red.instance, wit);
        red.witness = std::move(wit);
    } else {
        cert.warnings.push_back("witness omitted: output too large for the direct-path check");
    }
    return red;
}

// ---------------------------------------------------------------------------
// 6-Cut -> 2-Cut

std::array<int, 4> encode_color6(int alpha) {
    static const std::array<std::array<int, 4>, 6> table = {{{1, 1, 2, 2},
                                                             {1, 2, 1, 2},
                                                             {1, 2, 2, 1},
                                                             {2, 1, 1, 2},
                                                             {2, 1, 2, 1},
                                                             {2, 2, 1, 1}}};
    if (alpha < 1 || alpha > 6) throw ValidationError("color out of range 1..6");
    return table[static_cast<size_t>(alpha - 1)];
}

std::optional<int> decode_color6(const std::array<int, 4>& bits) {
    for (int alpha = 1; alpha <= 6; ++alpha)
        if (encode_color6(alpha) == bits) return alpha;
    return std::nullopt;
}

CutReduction reduce_6cut_to_2cut(const CutReconfigInstance& inst, const Rat& eps) {
    inst.validate();
    if (inst.k != 6) throw ValidationError("reduction expects a 6-coloring input");
    if (inst.graph.edges.empty()) throw ValidationError("reduction needs a nonempty edge list");

    int n = inst.graph.n;
    Rat W = inst.graph.total_weight();
    auto zpos = [&](int v, int i) { return (v - 1) * 4 + i; };  // i in 1..4

    std::map<std::pair<int, int>, Rat> acc;
    auto add = [&](int a, int b, const Rat& w) {
        if (a > b) std::swap(a, b);
        acc[{a, b}] += w;
    };
    for (const auto& e : inst.graph.edges) {
        Rat scale = e.w / W;
        // Within-block pair tests, weight 4/9 each side, uniform over 6 pairs.
        for (int i = 1; i <= 4; ++i)
            for (int j = i + 1; j <= 4; ++j) {
                add(zpos(e.u, i), zpos(e.u, j), scale * Rat(4, 9) / 6);
                add(zpos(e.v, i), zpos(e.v, j), scale * Rat(4, 9) / 6);
            }
        // Matching test, weight 1/9, uniform over the 4 aligned pairs.
        for (int i = 1; i <= 4; ++i) add(zpos(e.u, i), zpos(e.v, i), scale * Rat(1, 9) / 4);
    }

    CutReduction red;
    red.instance.k = 2;
    red.instance.graph.n = 4 * n;
    for (auto& [key, w] : acc) red.instance.graph.edges.push_back({key.first, key.second, w});

    auto encode = [&](const Coloring& f) {
        Coloring out;
        out.k = 2;
        out.colors.resize(static_cast<size_t>(4) * n);
        for (int v = 1; v <= n; ++v) {
            auto enc = encode_color6(f.colors[static_cast<size_t>(v - 1)]);
            for (int i = 1; i <= 4; ++i)
                out.colors[static_cast<size_t>(zpos(v, i) - 1)] = enc[static_cast<size_t>(i - 1)];
        }
        return out;
    };
    red.instance.start = encode(inst.start);
    red.instance.end = encode(inst.end);
    red.instance.validate();

    auto& cert = red.certificate;
    cert.name = "6to2";
    cert.input_summary = "6-cut reconfiguration, n=" + std::to_string(n) +
                         ", m=" + std::to_string(inst.graph.edges.size());
    cert.output_summary = "2-cut reconfiguration, n=" + std::to_string(red.instance.graph.n) +
                          ", m=" + std::to_string(red.instance.graph.edges.size());
    Rat delta_c = (Rat(19) + eps / 2) / 54;
    Rat delta_s = (Rat(19) + eps) / 54;
    cert.params = {{"eps", rat_to_string(eps)},
                   {"delta_c", rat_to_string(delta_c)},
                   {"delta_s", rat_to_string(delta_s)}};
    {
        auto deg = inst.graph.entry_degrees();
        int max_deg = *std::max_element(deg.begin(), deg.end());
        if (Rat(max_deg, static_cast<long>(inst.graph.edges.size())) >= eps / 70)
            cert.warnings.push_back("completeness bound needs Delta/|E| < eps/70; not met here");
    }

    CutSequence wit;
    Coloring cur = red.instance.start;
    wit.steps.push_back(cur);
    for (int v = 1; v <= n; ++v) {
        for (int i = 1; i <= 4; ++i) {
            size_t idx = static_cast<size_t>(zpos(v, i) - 1);
            if (cur.colors[idx] != red.instance.end.colors[idx]) {
                cur.colors[idx] = red.instance.end.colors[idx];
                wit.steps.push_back(cur);
            }
        }
    }
    cert.witness_value = sequence_value(red.instance, wit);
    red.witness = std::move(wit);
    return red;
}

// ---------------------------------------------------------------------------
// 2-Cut -> k-Cut for small k (expander-anchored palette blocks)

std::pair<WeightedMultigraph, Rat> expander_3regular(int n) {
    if (n < 4 || n % 2 != 0) throw ValidationError("expander needs even n >= 4");
    WeightedMultigraph g;
    g.n = n;
    std::map<std::pair<int, int>, bool> seen;
    auto add = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        if (!seen[{a, b}]) {
            seen[{a, b}] = true;
            g.edges.push_back({a, b, Rat(1)});
        }
    };
    for (int i = 1; i <= n; ++i) add(i, i % n + 1);          // cycle
    for (int i = 1; i <= n / 2; ++i) add(i, i + n / 2);      // diameters
    g.validate();

    Rat h;
    if (n <= 20) {
        // Exhaustive edge expansion over all proper nonempty subsets.
        bool first = true;
        for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
            int size = __builtin_popcount(mask);
            int small = std::min(size, n - size);
            int boundary = 0;
            for (const auto& e : g.edges) {
                bool in_u = (mask >> (e.u - 1)) & 1u;
                bool in_v = (mask >> (e.v - 1)) & 1u;
                boundary += in_u != in_v;
            }
            Rat ratio(boundary, small);
            if (first || ratio < h) h = ratio;
            first = false;
        }
    } else {
        // Cheeger bound h >= 3 * lambda_2 / 2 on the normalized Laplacian,
        // lambda_2 from power iteration on a deflated shifted adjacency.
        std::vector<std::vector<double>> A(static_cast<size_t>(n),
                                           std::vector<double>(static_cast<size_t>(n), 0.0));
        for (const auto& e : g.edges) {
            A[static_cast<size_t>(e.u - 1)][static_cast<size_t>(e.v - 1)] = 1.0 / 3.0;
            A[static_cast<size_t>(e.v - 1)][static_cast<size_t>(e.u - 1)] = 1.0 / 3.0;
        }
        // Largest eigenvalue of (A + I)/2 after removing the all-ones vector
        // gives mu; lambda_2 = 2(1 - mu).
        std::vector<double> x(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = (i % 2 == 0) ? 1.0 : -0.5;
        double mu = 0.0;
        for (int iter = 0; iter < 2000; ++iter) {
            double mean = 0.0;
            for (double v : x) mean += v;
            mean /= n;
            for (double& v : x) v -= mean;
            std::vector<double> y(static_cast<size_t>(n), 0.0);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j)
                    y[static_cast<size_t>(i)] += A[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                                                 x[static_cast<size_t>(j)];
                y[static_cast<size_t>(i)] = (y[static_cast<size_t>(i)] + x[static_cast<size_t>(i)]) / 2.0;
            }
            double norm = 0.0;
            for (double v : y) norm += v * v;
            norm = std::sqrt(norm);
            if (norm == 0.0) break;
            for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = y[static_cast<size_t>(i)] / norm;
            mu = norm;
        }
        double lambda2 = 2.0 * (1.0 - mu);
        double bound = 1.5 * lambda2 * 0.95;  // safety margin on the numeric estimate
        if (bound <= 0) bound = 1e-6;
        h = Rat(static_cast<long long>(bound * (1 << 20)), 1 << 20);
    }
    return {std::move(g), h};
}

CutReduction reduce_2cut_to_kcut_smallk(const CutReconfigInstance& inst, int k_target,
                                        const Rat& p1, const Rat& eps_c, const Rat& eps_s) {
    inst.validate();
    if (inst.k != 2) throw ValidationError("reduction expects a 2-coloring input");
    if (k_target < 3) throw ValidationError("reduction needs k_target >= 3");
    if (p1 <= 0 || p1 >= 1) throw ValidationError("p1 must lie in (0, 1)");
    if (inst.graph.edges.empty()) throw ValidationError("reduction needs a nonempty edge list");

    int n = inst.graph.n;
    int k = k_target;
    auto [expander, h] = expander_3regular(n);
    Rat p2 = Rat(1) - p1;
    Rat W = inst.graph.total_weight();
    auto zpos = [&](int v, int i) { return n + (v - 1) * k + i; };  // i in 1..k

    std::map<std::pair<int, int>, Rat> acc;
    auto add = [&](int a, int b, const Rat& w) {
        if (a > b) std::swap(a, b);
        acc[{a, b}] += w;
    };
    // First test: uniform expander edge, ordered palette pair (i, j), i != j.
    Rat per_first = p1 / Rat(static_cast<long>(expander.edges.size())) /
                    (Rat(k) * (k - 1));
    for (const auto& xe : expander.edges)
        for (int i = 1; i <= k; ++i)
            for (int j = 1; j <= k; ++j) {
                if (i == j) continue;
                add(zpos(xe.u, i), zpos(xe.v, j), per_first);
            }
    // Second test: uniform input edge; compare the endpoints directly with
    // weight 1/(2k-3), or anchor each endpoint against its palette colors
    // 3..k with weight (k-2)/(2k-3) per side.
    for (const auto& e : inst.graph.edges) {
        Rat scale = p2 * e.w / W;
        add(e.u, e.v, scale / (2 * k - 3));
        for (int i = 3; i <= k; ++i) {
            add(e.u, zpos(e.u, i), scale * Rat(k - 2, 2 * k - 3) / (k - 2));
            add(e.v, zpos(e.v, i), scale * Rat(k - 2, 2 * k - 3) / (k - 2));
        }
    }

    CutReduction red;
    red.instance.k = k;
    red.instance.graph.n = n * (k + 1);
    for (auto& [key, w] : acc) red.instance.graph.edges.push_back({key.first, key.second, w});

    auto encode = [&](const Coloring& f) {
        Coloring out;
        out.k = k;
        out.colors.resize(static_cast<size_t>(n) * (k + 1));
        for (int v = 1; v <= n; ++v)
            out.colors[static_cast<size_t>(v - 1)] = f.colors[static_cast<size_t>(v - 1)];
        for (int v = 1; v <= n; ++v)
            for (int i = 1; i <= k; ++i) out.colors[static_cast<size_t>(zpos(v, i) - 1)] = i;
        return out;
    };
    red.instance.start = encode(inst.start);
    red.instance.end = encode(inst.end);
    red.instance.validate();

    auto& cert = red.certificate;
    cert.name = "smallk";
    cert.input_summary = "2-cut reconfiguration, n=" + std::to_string(n) +
                         ", m=" + std::to_string(inst.graph.edges.size());
    cert.output_summary = std::to_string(k) + "-cut reconfiguration, n=" +
                          std::to_string(red.instance.graph.n) +
                          ", m=" + std::to_string(red.instance.graph.edges.size());
    Rat delta_c = p2 * eps_c / (2 * k - 3);
    Rat delta_s = p2 * ((eps_s + eps_c) / 2) / (2 * k - 3);
    cert.params = {{"k", std::to_string(k)},
                   {"p1", rat_to_string(p1)},
                   {"p2", rat_to_string(p2)},
                   {"expansion_lower_bound", rat_to_string(h)},
                   {"eps_c", rat_to_string(eps_c)},
                   {"eps_s", rat_to_string(eps_s)},
                   {"delta_c", rat_to_string(delta_c)},
                   {"delta_s", rat_to_string(delta_s)}};

    // Original vertices are single sites in H, so the direct input path maps
    // to a valid witness step by step.
    CutSequence wit;
    Coloring cur = red.instance.start;
    wit.steps.push_back(cur);
    for (int v = 1; v <= n; ++v) {
        size_t idx = static_cast<size_t>(v - 1);
        if (cur.colors[idx] != red.instance.end.colors[idx]) {
            cur.colors[idx] = red.instance.end.colors[idx];
            wit.steps.push_back(cur);
        }
    }
    cert.witness_value = sequence_value(red.instance, wit);
    red.witness = std::move(wit);
    return red;
}

// ---------------------------------------------------------------------------
// NCL verifier and the Horn CNF emulation

ExplicitVerifier ncl_verifier(const AndOrGraph& g) {
    g.validate();
    ExplicitVerifier v;
    v.proof_len = static_cast<int>(g.links.size());
    v.q = 3;
    v.degree = 2;
    auto inc = g.incidence();
    std::size_t max_accepted = 0;
    for (int node = 1; node <= static_cast<int>(g.nodes.size()); ++node) {
        VerifierCheck check;
        check.queries = inc[static_cast<size_t>(node)];
        std::sort(check.queries.begin(), check.queries.end());
        for (std::uint32_t view = 0; view < 8; ++view) {
            Assignment orientation;
            orientation.bits.assign(g.links.size(), 0);
            for (int t = 0; t < 3; ++t)
                orientation.bits[static_cast<size_t>(check.queries[static_cast<size_t>(t)] - 1)] =
                    (view >> t) & 1u;
            if (node_satisfied(g, check.queries, node, orientation)) check.accepted.push_back(view);
        }
        max_accepted = std::max(max_accepted, check.accepted.size());
        v.checks.push_back(std::move(check));
    }
    v.free_bits = std::log2(static_cast<double>(std::max<std::size_t>(max_accepted, 1)));
    v.validate();
    return v;
}

SatReduction horn_cnf(const ExplicitVerifier& v, int lambda, const Assignment& start,
                      const Assignment& end, const Rat& eps, std::uint64_t max_clauses,
                      std::vector<std::pair<std::vector<int>, std::uint64_t>>* groups) {
    v.validate();
    if (lambda < 2) throw ValidationError("horn_cnf needs lambda >= 2");
    if (start.n() != v.proof_len || end.n() != v.proof_len)
        throw ValidationError("endpoint proof length mismatch");

    auto check_accepts = [&](const VerifierCheck& c, const Assignment& proof) {
        std::uint32_t view = 0;
        for (size_t t = 0; t < c.queries.size(); ++t)
            if (proof.bits[static_cast<size_t>(c.queries[t] - 1)]) view |= (1u << t);
        return std::binary_search(c.accepted.begin(), c.accepted.end(), view);
    };
    for (size_t ci = 0; ci < v.checks.size(); ++ci) {
        if (!check_accepts(v.checks[ci], start))
            throw ValidationError("start proof rejected by check " + std::to_string(ci + 1));
        if (!check_accepts(v.checks[ci], end))
            throw ValidationError("end proof rejected by check " + std::to_string(ci + 1));
    }

    int q = v.q;
    int num_checks = static_cast<int>(v.checks.size());
    SatReduction red;
    red.instance.formula.n = v.proof_len;
    red.instance.formula.k = q * lambda;

    // Rejected views per check (complement of the accepted set).
    std::vector<std::vector<std::uint32_t>> rejected(static_cast<size_t>(num_checks));
    for (int c = 0; c < num_checks; ++c)
        for (std::uint32_t view = 0; view < (1u << q); ++view)
            if (!std::binary_search(v.checks[static_cast<size_t>(c)].accepted.begin(),
                                    v.checks[static_cast<size_t>(c)].accepted.end(), view))
                rejected[static_cast<size_t>(c)].push_back(view);

    // Ordered lambda-tuples of checks in lexicographic order; only tuples with
    // pairwise disjoint query sets contribute clauses.
    std::vector<int> tuple(static_cast<size_t>(lambda), 0);
    std::uint64_t emitted = 0;
    bool done = false;
    while (!done) {
        bool disjoint = true;
        std::vector<char> used(static_cast<size_t>(v.proof_len) + 1, 0);
        for (int i = 0; i < lambda && disjoint; ++i)
            for (int pos : v.checks[static_cast<size_t>(tuple[static_cast<size_t>(i)])].queries) {
                if (used[static_cast<size_t>(pos)]) {
                    disjoint = false;
                    break;
                }
                used[static_cast<size_t>(pos)] = 1;
            }
        if (disjoint) {
            // Views: accepted for checks 1..lambda-1, rejected for the last.
            std::uint64_t group_count = 1;
            for (int i = 0; i + 1 < lambda; ++i)
                group_count *= v.checks[static_cast<size_t>(tuple[static_cast<size_t>(i)])].accepted.size();
            group_count *= rejected[static_cast<size_t>(tuple[static_cast<size_t>(lambda - 1)])].size();
            emitted += group_count;
            if (emitted > max_clauses)
                throw BudgetError("horn_cnf would emit more than " + std::to_string(max_clauses) +
                                  " clauses");
            if (groups) {
                std::vector<int> ids;
                for (int i = 0; i < lambda; ++i) ids.push_back(tuple[static_cast<size_t>(i)] + 1);
                groups->push_back({std::move(ids), group_count});
            }
            std::vector<std::uint32_t> views(static_cast<size_t>(lambda), 0);
            std::vector<size_t> view_idx(static_cast<size_t>(lambda), 0);
            bool view_done = false;
            while (!view_done) {
                std::vector<int> clause;
                for (int i = 0; i < lambda; ++i) {
                    const auto& chk = v.checks[static_cast<size_t>(tuple[static_cast<size_t>(i)])];
                    std::uint32_t view =
                        (i + 1 < lambda)
                            ? chk.accepted[view_idx[static_cast<size_t>(i)]]
                            : rejected[static_cast<size_t>(tuple[static_cast<size_t>(i)])]
                                      [view_idx[static_cast<size_t>(i)]];
                    for (int t = 0; t < q; ++t) {
                        int pos = chk.queries[static_cast<size_t>(t)];
                        bool bit = (view >> t) & 1u;
                        clause.push_back(bit ? -pos : pos);
                    }
                }
                red.instance.formula.clauses.push_back(std::move(clause));
                // Advance the mixed-radix view counter.
                int i = lambda - 1;
                for (; i >= 0; --i) {
                    size_t radix =
                        (i + 1 < lambda)
                            ? v.checks[static_cast<size_t>(tuple[static_cast<size_t>(i)])].accepted.size()
                            : rejected[static_cast<size_t>(tuple[static_cast<size_t>(i)])].size();
                    if (++view_idx[static_cast<size_t>(i)] < radix) break;
                    view_idx[static_cast<size_t>(i)] = 0;
                }
                if (i < 0) view_done = true;
            }
        }
        int i = lambda - 1;
        for (; i >= 0; --i) {
            if (++tuple[static_cast<size_t>(i)] < num_checks) break;
            tuple[static_cast<size_t>(i)] = 0;
        }
        if (i < 0) done = true;
    }

    if (red.instance.formula.clauses.empty())
        throw ValidationError("horn_cnf emitted no clauses: no disjoint check tuples");
    red.instance.start = start;
    red.instance.end = end;
    red.instance.validate();

    auto& cert = red.certificate;
    cert.name = "horn-cnf";
    cert.input_summary = "verifier with " + std::to_string(num_checks) + " checks, q=" +
                         std::to_string(q) + ", proof_len=" + std::to_string(v.proof_len);
    cert.output_summary = "E" + std::to_string(q * lambda) + "-SAT reconfiguration, n=" +
                          std::to_string(red.instance.formula.n) + ", m=" +
                          std::to_string(red.instance.formula.m());
    double per_tuple_cap = std::pow(2.0, v.free_bits * (lambda - 1)) *
                           (std::pow(2.0, q) - std::pow(2.0, v.free_bits));
    Rat one_minus_eps = Rat(1) - eps;
    Rat soundness = eps;
    for (int i = 0; i < lambda - 1; ++i) soundness *= one_minus_eps;
    // delta = eps (1-eps)^{lambda-1} / (4 * 2^{f(lambda-1)+q})
    double denom = 4.0 * std::pow(2.0, v.free_bits * (lambda - 1) + q);
    cert.params = {{"lambda", std::to_string(lambda)},
                   {"q", std::to_string(q)},
                   {"free_bits", std::to_string(v.free_bits)},
                   {"degree", std::to_string(v.degree)},
                   {"eps", rat_to_string(eps)},
                   {"clauses", std::to_string(red.instance.formula.m())},
                   {"per_tuple_clause_cap", std::to_string(per_tuple_cap)},
                   {"delta", std::to_string(rat_to_double(soundness) / denom)}};
    cert.warnings.push_back(
        "soundness requires the input-length thresholds on r(n); they are not checked here");

    // Perfect completeness: both endpoints satisfy every emitted clause, so
    // the direct flip path between them is checked as the witness.
    SatSequence wit;
    Assignment cur = start;
    wit.steps.push_back(cur);
    for (int i = 0; i < v.proof_len; ++i) {
        if (cur.bits[static_cast<size_t>(i)] != end.bits[static_cast<size_t>(i)]) {
            cur.bits[static_cast<size_t>(i)] ^= 1;
            wit.steps.push_back(cur);
        }
    }
    cert.witness_value = sequence_value(red.instance, wit);
    red.witness = std::move(wit);
    return red;
}

// ---------------------------------------------------------------------------
// Clause width reduction

SatReduction reduce_clause_width(const SatReconfigInstance& inst, int k_target) {
    inst.validate();
    if (k_target < 3) throw ValidationError("width reduction needs k_target >= 3");
    {
        auto viols = endpoint_violations(inst);
        if (!viols.empty()) throw ValidationError("width reduction needs satisfying endpoints");
    }

    SatReduction red;
    CnfFormula& out = red.instance.formula;
    out.n = inst.formula.n;
    out.k = k_target;
    std::vector<std::uint8_t> start_bits = inst.start.bits;
    std::vector<std::uint8_t> end_bits = inst.end.bits;

    int total_fresh = 0;
    for (size_t j = 0; j < inst.formula.clauses.size(); ++j) {
        const auto& cl = inst.formula.clauses[j];
        int w = static_cast<int>(cl.size());
        if (w == k_target) {
            out.clauses.push_back(cl);
            continue;
        }
        if (w < k_target)
            throw ValidationError("clause " + std::to_string(j + 1) + " has width " +
                                  std::to_string(w) + " below the target " +
                                  std::to_string(k_target));
        // p = ceil(3 w / k) chained clauses over p-1 fresh variables.
        int p = (3 * w + k_target - 1) / k_target;
        int base = out.n;  // fresh z variables occupy base+1 .. base+p-1
        out.n += p - 1;
        total_fresh += p - 1;

        // Cyclic windows of k-2 distinct literals covering the clause; the
        // first and last windows take one extra literal.
        auto window = [&](int start_idx, int len) {
            std::vector<int> lits;
            for (int t = 0; t < len; ++t)
                lits.push_back(cl[static_cast<size_t>((start_idx + t) % w)]);
            return lits;
        };
        std::vector<std::vector<int>> sets;
        for (int i = 0; i < p; ++i) sets.push_back(window(i * (k_target - 2) % w, k_target - 2));
        auto extend = [&](std::vector<int>& s) {
            for (int lit : cl)
                if (std::find(s.begin(), s.end(), lit) == s.end()) {
                    s.push_back(lit);
                    return;
                }
            throw ValidationError("cannot extend a cover set without repeating a variable");
        };
        extend(sets.front());
        extend(sets.back());

        for (int i = 1; i <= p; ++i) {
            std::vector<int> clause;
            if (i < p) clause.push_back(-(base + i));       // z_i -> ...
            if (i > 1) clause.push_back(base + i - 1);      // ... or z_{i-1}
            for (int lit : sets[static_cast<size_t>(i - 1)]) clause.push_back(lit);
            out.clauses.push_back(std::move(clause));
        }

        // Satisfying extension: z_i = 0 below the first true window, 1 from it on.
        auto extend_assignment = [&](std::vector<std::uint8_t>& bits, const Assignment& alpha) {
            int first_true = -1;
            for (int i = 0; i < p && first_true < 0; ++i)
                for (int lit : sets[static_cast<size_t>(i)]) {
                    int var = std::abs(lit) - 1;
                    bool val = alpha.bits[static_cast<size_t>(var)] != 0;
                    if ((lit > 0) == val) {
                        first_true = i;
                        break;
                    }
                }
            if (first_true < 0)
                throw ValidationError("endpoint does not satisfy clause " + std::to_string(j + 1));
            for (int i = 1; i <= p - 1; ++i) bits.push_back(i - 1 >= first_true ? 1 : 0);
        };
        extend_assignment(start_bits, inst.start);
        extend_assignment(end_bits, inst.end);
    }

    red.instance.start.bits = std::move(start_bits);
    red.instance.end.bits = std::move(end_bits);
    out.validate();
    red.instance.validate();
    {
        auto viols = endpoint_violations(red.instance);
        if (!viols.empty())
            throw std::logic_error("width reduction produced a violated endpoint");
    }

    auto& cert = red.certificate;
    cert.name = "rho";
    cert.input_summary = "width " + std::string(inst.formula.k ? std::to_string(inst.formula.k)
                                                               : "mixed") +
                         " formula, n=" + std::to_string(inst.formula.n) +
                         ", m=" + std::to_string(inst.formula.m());
    cert.output_summary = "E" + std::to_string(k_target) + "-SAT reconfiguration, n=" +
                          std::to_string(out.n) + ", m=" + std::to_string(out.m());
    cert.params = {{"k_target", std::to_string(k_target)},
                   {"fresh_variables", std::to_string(total_fresh)}};
    cert.warnings.push_back(
        "no completeness witness: mapping one needs an input reconfiguration sequence");
    return red;
}

// ---------------------------------------------------------------------------
// NP-hardness constructions

namespace {

std::optional<Assignment> brute_force_satisfying(const CnfFormula& phi, int max_vars = 24) {
    if (phi.n > max_vars) return std::nullopt;
    for (std::uint64_t mask = 0; mask < (1ull << phi.n); ++mask) {
        Assignment a;
        a.bits.resize(static_cast<size_t>(phi.n));
        for (int v = 0; v < phi.n; ++v) a.bits[static_cast<size_t>(v)] = (mask >> v) & 1ull;
        bool ok = true;
        for (const auto& cl : phi.clauses)
            if (!clause_satisfied(cl, a)) {
                ok = false;
                break;
            }
        if (ok) return a;
    }
    return std::nullopt;
}

}  // namespace

SatReduction np_gap_reduction(const CnfFormula& phi, int k_target, const Rat& delta) {
    phi.validate();
    if (phi.k != 3) throw ValidationError("np reduction expects an E3 formula");
    if (k_target < 3) throw ValidationError("np reduction needs k_target >= 3");
    if (phi.clauses.empty()) throw ValidationError("np reduction needs a nonempty formula");
    if (delta <= 0 || delta > 1) throw ValidationError("delta must lie in (0, 1]");

    int n = phi.n, m = phi.m();
    SatReduction red;
    CnfFormula& out = red.instance.formula;
    auto& cert = red.certificate;
    cert.name = "np";
    cert.input_summary = "E3 formula, n=" + std::to_string(n) + ", m=" + std::to_string(m);

    // ceil(delta * m) copies of each padding clause.
    Int pad_num = rat_num(delta) * m;
    Int pad_den = rat_den(delta);
    long pad = static_cast<long>((pad_num + pad_den - 1) / pad_den);
    if (pad < 1) pad = 1;

    std::optional<Assignment> alpha = brute_force_satisfying(phi);

    if (k_target >= 5) {
        int K = k_target - 3;
        out.n = n + K;
        out.k = k_target;
        for (const auto& cl : phi.clauses) {
            for (int i = 1; i <= K; ++i) {
                std::vector<int> clause = cl;
                clause.push_back(n + i);  // y_i
                for (int i2 = 1; i2 <= K; ++i2)
                    if (i2 != i) clause.push_back(-(n + i2));
                out.clauses.push_back(std::move(clause));
            }
        }
        red.instance.start.bits.assign(static_cast<size_t>(out.n), 1);
        red.instance.end.bits.assign(static_cast<size_t>(out.n), 0);
        cert.params = {{"k", std::to_string(k_target)},
                       {"K", std::to_string(K)},
                       {"clauses", std::to_string(out.m())},
                       {"soundness_claim", "opt < 1 - delta/(k-3) when no assignment exceeds 1-delta"},
                       {"delta", rat_to_string(delta)}};

        if (alpha) {
            SatSequence wit;
            Assignment cur = red.instance.start;
            wit.steps.push_back(cur);
            auto flip_to = [&](int var_idx, std::uint8_t val) {
                if (cur.bits[static_cast<size_t>(var_idx)] != val) {
                    cur.bits[static_cast<size_t>(var_idx)] = val;
                    wit.steps.push_back(cur);
                }
            };
            for (int i = 0; i < n; ++i) flip_to(i, alpha->bits[static_cast<size_t>(i)]);
            for (int i = 0; i < K; ++i) flip_to(n + i, 0);
            for (int i = 0; i < n; ++i) flip_to(i, 0);
            cert.witness_value = sequence_value(red.instance, wit);
            red.witness = std::move(wit);
        }
    } else {
        // k = 3 gives the mixed {3,4} construction, k = 4 the E4 one.
        int zs = k_target == 3 ? 2 : 3;
        int y = n + 1;
        out.n = n + 1 + zs;
        out.k = k_target == 4 ? 4 : 0;
        for (const auto& cl : phi.clauses) {
            std::vector<int> clause = cl;
            clause.push_back(y);
            out.clauses.push_back(std::move(clause));
        }
        std::vector<std::vector<int>> pads;
        if (k_target == 3) {
            pads = {{-y, -(y + 1), y + 2}, {-y, y + 1, -(y + 2)}};
        } else {
            pads = {{-y, -(y + 1), -(y + 2), y + 3},
                    {-y, -(y + 1), y + 2, -(y + 3)},
                    {-y, y + 1, -(y + 2), -(y + 3)}};
        }
        for (const auto& pc : pads)
            for (long c = 0; c < pad; ++c) out.clauses.push_back(pc);

        red.instance.start.bits.assign(static_cast<size_t>(out.n), 0);
        red.instance.end.bits.assign(static_cast<size_t>(out.n), 0);
        for (int i = 0; i < n; ++i) red.instance.start.bits[static_cast<size_t>(i)] = 1;
        // start: (y, z...) = all ones; end: y = 1, z = 0.
        for (int i = n; i < out.n; ++i) red.instance.start.bits[static_cast<size_t>(i)] = 1;
        red.instance.end.bits[static_cast<size_t>(y - 1)] = 1;

        cert.params = {{"k", std::to_string(k_target)},
                       {"m1", std::to_string(pad)},
                       {"m2", std::to_string(pad)},
                       {"delta", rat_to_string(delta)},
                       {"clauses", std::to_string(out.m())}};
        if (k_target == 4) cert.params.push_back({"m3", std::to_string(pad)});
        if (k_target == 3)
            cert.params.push_back({"note", "mixed {3,4} widths; chain through reduce_clause_width for E3"});

        if (alpha) {
            SatSequence wit;
            Assignment cur = red.instance.start;
            wit.steps.push_back(cur);
            auto flip_var = [&](int var1) {  // 1-based
                cur.bits[static_cast<size_t>(var1 - 1)] ^= 1;
                wit.steps.push_back(cur);
            };
            for (int i = 0; i < n; ++i)
                if (cur.bits[static_cast<size_t>(i)] != alpha->bits[static_cast<size_t>(i)])
                    flip_var(i + 1);
            flip_var(y);
            for (int z = 1; z <= zs; ++z) flip_var(y + z);
            flip_var(y);
            for (int i = 0; i < n; ++i)
                if (cur.bits[static_cast<size_t>(i)] != red.instance.end.bits[static_cast<size_t>(i)])
                    flip_var(i + 1);
            cert.witness_value = sequence_value(red.instance, wit);
            red.witness = std::move(wit);
        }
    }
    if (!alpha)
        cert.warnings.push_back(
            "no completeness witness: no satisfying assignment found within the search cap");

    out.validate();
    red.instance.validate();
    {
        auto viols = endpoint_violations(red.instance);
        if (!viols.empty()) throw std::logic_error("np reduction produced a violated endpoint");
    }
    cert.output_summary = (out.k ? "E" + std::to_string(out.k) : std::string("mixed-width")) +
                          "-SAT reconfiguration, n=" + std::to_string(out.n) + ", m=" +
                          std::to_string(out.m());
    return red;
}

SatReconfigInstance horn_example(int n) {
    if (n < 3 || n % 3 != 0) throw ValidationError("horn_example needs n >= 3 divisible by 3");
    SatReconfigInstance inst;
    inst.formula.n = n;
    inst.formula.k = 3;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int l = j + 1; l <= n; ++l) {
                inst.formula.clauses.push_back({i, -j, -l});
                inst.formula.clauses.push_back({-i, j, -l});
                inst.formula.clauses.push_back({-i, -j, l});
            }
    inst.start.bits.assign(static_cast<size_t>(n), 0);
    inst.end.bits.assign(static_cast<size_t>(n), 1);
    inst.validate();
    return inst;
}

}  // namespace reconfig
