#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reconfig/approx_cut.hpp"
#include "reconfig/approx_sat.hpp"
#include "reconfig/exact_solver.hpp"
#include "reconfig/instances.hpp"
#include "reconfig/prng.hpp"
#include "reconfig/rational.hpp"
#include "reconfig/reductions.hpp"
#include "reconfig/valuation.hpp"
#include "reconfig/verifiers.hpp"

namespace {

using namespace reconfig;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << content;
}

std::string fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string rat_line(const Rat& r) {
    return rat_to_fraction_string(r) + " (" + rat_to_decimal(r) + ")";
}

struct Report {
    std::vector<std::string> lines;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void add(const std::string& key, const std::string& value) {
        lines.push_back(key + " = " + value);
    }
    void input(const std::string& path, const std::string& content) {
        lines.push_back("input " + path + " fnv1a = " + fnv1a(content));
    }
    void flush() {
        for (const auto& l : lines) std::cout << l << "\n";
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        std::cout << "wall_time_ms = " << ms << "\n";
    }
};

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("RECONFIG_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return t;
    }
    return 1;
}

bool is_sat_instance(const std::string& text) {
    return text.find("satreconf") != std::string::npos;
}

Rat parse_rat_flag(const std::string& s, const char* what) {
    try {
        return parse_rational(s);
    } catch (const std::exception&) {
        throw ParseError(std::string("malformed ") + what + " '" + s + "'");
    }
}

// G(n, p) simple graph with unit weights.
WeightedMultigraph random_graph(int n, const Rat& p, SplitMix64& rng) {
    WeightedMultigraph g;
    g.n = n;
    std::uint64_t den = rat_den(p).convert_to<std::uint64_t>();
    std::uint64_t num = rat_num(p).convert_to<std::uint64_t>();
    for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v)
            if (rng.below(den) < num) g.edges.push_back({u, v, Rat(1)});
    return g;
}

Coloring random_coloring(int n, int k, SplitMix64& rng) {
    Coloring c;
    c.k = k;
    for (int i = 0; i < n; ++i) c.colors.push_back(1 + static_cast<int>(rng.below(k)));
    return c;
}

Assignment random_assignment(int n, SplitMix64& rng) {
    Assignment a;
    for (int i = 0; i < n; ++i) a.bits.push_back(static_cast<std::uint8_t>(rng.below(2)));
    return a;
}

// Random satisfiable E-k formula: clauses are resampled until both planted
// endpoints satisfy them.
SatReconfigInstance random_sat_instance(int n, int m, int k, SplitMix64& rng) {
    SatReconfigInstance inst;
    inst.formula.n = n;
    inst.formula.k = k;
    inst.start = random_assignment(n, rng);
    inst.end = random_assignment(n, rng);
    while (inst.formula.m() < m) {
        std::vector<int> vars(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) vars[static_cast<size_t>(i)] = i + 1;
        for (int i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n - i)));
            std::swap(vars[static_cast<size_t>(i)], vars[j]);
        }
        std::vector<int> clause;
        for (int i = 0; i < k; ++i)
            clause.push_back(rng.below(2) ? vars[static_cast<size_t>(i)]
                                          : -vars[static_cast<size_t>(i)]);
        if (clause_satisfied(clause, inst.start) && clause_satisfied(clause, inst.end))
            inst.formula.clauses.push_back(std::move(clause));
    }
    return inst;
}

void write_reduction_outputs(const std::string& out_path, const std::string& cert_path,
                             const std::string& instance_text, const ReductionCertificate& cert,
                             const std::optional<std::string>& witness_text, Report& report) {
    write_file(out_path, instance_text);
    report.add("output", out_path);
    std::string cp = cert_path.empty() ? out_path + ".cert" : cert_path;
    write_file(cp, serialize_certificate(cert));
    report.add("certificate", cp);
    if (witness_text) {
        write_file(out_path + ".witness", *witness_text);
        report.add("witness", out_path + ".witness");
    }
    for (const auto& l : cert.params) report.add("param " + l.first, l.second);
    for (const auto& w : cert.warnings) report.add("warning", w);
    if (cert.witness_value) report.add("witness_value", rat_line(*cert.witness_value));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maxmin reconfiguration toolkit"};
    app.require_subcommand(1);

    std::string arg_instance, arg_sequence, arg_out, arg_cert, arg_kind, arg_name, arg_input;
    std::string arg_mode = "derand", arg_endpoints = "uplift";
    std::string arg_epsilon, arg_rho = "1", arg_p1 = "1/2", arg_eps_c = "0", arg_eps_s = "1",
                arg_eps = "1/2", arg_delta = "1/8", arg_p = "1/4";
    std::uint64_t arg_seed = 0, arg_budget = 1u << 20, arg_max_clauses = 1u << 20;
    int arg_k = 0, arg_n = 0, arg_m = 0, arg_lambda = 2, arg_threads = 0;

    auto* gen = app.add_subcommand("gen", "generate instances");
    gen->add_option("what", arg_kind, "cut | sat | horn-example")->required();
    gen->add_option("--n", arg_n, "vertex/variable count");
    gen->add_option("--m", arg_m, "clause count (sat)");
    gen->add_option("--k", arg_k, "colors / clause width");
    gen->add_option("--p", arg_p, "edge probability num/den (cut)");
    gen->add_option("--endpoints", arg_endpoints, "random | uplift (cut)");
    gen->add_option("--seed", arg_seed, "PRNG seed");
    gen->add_option("-o,--out", arg_out, "output path")->required();

    auto* exact = app.add_subcommand("exact", "exact maxmin value by bottleneck search");
    exact->add_option("instance", arg_instance)->required();
    exact->add_option("--budget", arg_budget, "max configurations");
    exact->add_option("--threads", arg_threads);
    exact->add_option("-o,--out", arg_out, "witness path");

    auto* acut = app.add_subcommand("approx-cut", "(1 - 2/k)-factor cut reconfiguration");
    acut->add_option("instance", arg_instance)->required();
    acut->add_option("--mode", arg_mode, "random | derand");
    acut->add_option("--seed", arg_seed);
    acut->add_option("--epsilon", arg_epsilon, "slack (default 1/k^3)");
    acut->add_option("--threads", arg_threads);
    acut->add_option("-o,--out", arg_out, "sequence path");

    auto* asat = app.add_subcommand("approx-sat", "(1 - 2.5/k)-factor SAT reconfiguration");
    asat->add_option("instance", arg_instance)->required();
    asat->add_option("--mode", arg_mode, "random | derand");
    asat->add_option("--seed", arg_seed);
    asat->add_option("--threads", arg_threads);
    asat->add_option("-o,--out", arg_out, "sequence path");

    auto* eval = app.add_subcommand("eval", "evaluate a sequence against an instance");
    eval->add_option("instance", arg_instance)->required();
    eval->add_option("sequence", arg_sequence)->required();

    auto* tester = app.add_subcommand("tester", "exact tester probabilities on grids");
    tester->add_option("--kind", arg_kind, "stripe | cons | edge")->required();
    tester->add_option("--k", arg_k)->required();
    tester->add_option("--rho", arg_rho, "edge tester mixture parameter");
    tester->add_option("grids", arg_input, "grid file (one grid for stripe, two otherwise)")
        ->required();

    auto* reduce = app.add_subcommand("reduce", "gap-preserving reductions and generators");
    reduce->add_option("--name", arg_name, "crazy | 6to2 | smallk | rho | np | horn-cnf | horn-example")
        ->required();
    reduce->add_option("input", arg_input, "input file (instance / cnf / andor)");
    reduce->add_option("--k", arg_k, "target k");
    reduce->add_option("--n", arg_n, "size (horn-example)");
    reduce->add_option("--rho", arg_rho, "edge tester parameter (crazy)");
    reduce->add_option("--p1", arg_p1, "first-test weight (smallk)");
    reduce->add_option("--lambda", arg_lambda, "checks per tuple (horn-cnf)");
    reduce->add_option("--eps-c", arg_eps_c, "claimed input completeness gap");
    reduce->add_option("--eps-s", arg_eps_s, "claimed input soundness gap");
    reduce->add_option("--eps", arg_eps, "claimed input gap (6to2, horn-cnf)");
    reduce->add_option("--delta", arg_delta, "padding fraction (np)");
    reduce->add_option("--max-clauses", arg_max_clauses, "emission budget (horn-cnf)");
    reduce->add_option("--cert", arg_cert, "certificate path (default <out>.cert)");
    reduce->add_option("-o,--out", arg_out, "output instance path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    Report report;
    {
        std::string cmd = "reconfig";
        for (int i = 1; i < argc; ++i) cmd += std::string(" ") + argv[i];
        report.add("command", cmd);
        report.add("seed", std::to_string(arg_seed));
    }

    try {
        if (gen->parsed()) {
            SplitMix64 rng(arg_seed);
            if (arg_kind == "cut") {
                if (arg_n < 2 || arg_k < 2) throw ParseError("gen cut needs --n >= 2 and --k >= 2");
                WeightedMultigraph g = random_graph(arg_n, parse_rat_flag(arg_p, "--p"), rng);
                while (g.edges.empty()) g = random_graph(arg_n, parse_rat_flag(arg_p, "--p"), rng);
                CutReconfigInstance inst;
                inst.graph = std::move(g);
                inst.k = arg_k;
                inst.start = random_coloring(arg_n, arg_k, rng);
                inst.end = random_coloring(arg_n, arg_k, rng);
                if (arg_endpoints == "uplift") {
                    inst.start = uplift_low_value(inst.graph, inst.start).second;
                    inst.end = uplift_low_value(inst.graph, inst.end).second;
                } else if (arg_endpoints != "random") {
                    throw ParseError("--endpoints must be random or uplift");
                }
                inst.validate();
                write_file(arg_out, serialize_cut_instance(inst));
                report.add("output", arg_out);
                report.add("n", std::to_string(inst.graph.n));
                report.add("m", std::to_string(inst.graph.edges.size()));
            } else if (arg_kind == "sat") {
                if (arg_n < 1 || arg_m < 1 || arg_k < 1)
                    throw ParseError("gen sat needs --n, --m and --k");
                if (arg_k > arg_n) throw ParseError("gen sat needs --k <= --n");
                auto inst = random_sat_instance(arg_n, arg_m, arg_k, rng);
                write_file(arg_out, serialize_sat_instance(inst));
                report.add("output", arg_out);
            } else if (arg_kind == "horn-example") {
                if (arg_n < 3) throw ParseError("gen horn-example needs --n");
                auto inst = horn_example(arg_n);
                write_file(arg_out, serialize_sat_instance(inst));
                report.add("output", arg_out);
                report.add("clauses", std::to_string(inst.formula.m()));
            } else {
                throw ParseError("unknown gen target '" + arg_kind + "'");
            }
        } else if (exact->parsed()) {
            std::string text = read_file(arg_instance);
            report.input(arg_instance, text);
            if (is_sat_instance(text)) {
                std::vector<EndpointViolation> viols;
                auto inst = parse_sat_instance(text, &viols);
                for (const auto& v : viols)
                    std::cerr << "warning: " << (v.start ? "start" : "end")
                              << " assignment violates clause " << v.clause_index << "\n";
                auto res = opt_sat_exact(inst, arg_budget, resolve_threads(arg_threads));
                report.add("opt", rat_line(res.opt));
                report.add("explored", std::to_string(res.explored));
                if (!arg_out.empty()) {
                    write_file(arg_out, serialize_sequence(res.witness));
                    report.add("witness", arg_out);
                }
            } else {
                auto inst = parse_cut_instance(text);
                auto res = opt_cut_exact(inst, arg_budget, resolve_threads(arg_threads));
                report.add("opt", rat_line(res.opt));
                report.add("explored", std::to_string(res.explored));
                if (!arg_out.empty()) {
                    write_file(arg_out, serialize_sequence(res.witness));
                    report.add("witness", arg_out);
                }
            }
        } else if (acut->parsed()) {
            std::string text = read_file(arg_instance);
            report.input(arg_instance, text);
            auto inst = parse_cut_instance(text);
            CutAlgoConfig cfg;
            cfg.seed = arg_seed;
            if (arg_mode == "random")
                cfg.mode = AlgoMode::random;
            else if (arg_mode == "derand")
                cfg.mode = AlgoMode::derand;
            else
                throw ParseError("--mode must be random or derand");
            if (!arg_epsilon.empty()) cfg.epsilon = parse_rat_flag(arg_epsilon, "--epsilon");
            auto res = approx_cut_reconfig(inst, cfg);
            report.add("achieved", rat_line(res.achieved));
            report.add("guarantee_factor", rat_line(res.guarantee_factor));
            report.add("guarantee_bound", rat_line(res.guarantee_bound));
            if (res.estimator_root) report.add("estimator_root", rat_line(*res.estimator_root));
            report.add("regime", res.high_prob_regime ? "high-probability (|E| >= 10^6)"
                                                      : "estimator-certificate (|E| < 10^6)");
            for (const auto& n : res.notes) report.add("note", n);
            if (!arg_out.empty()) {
                write_file(arg_out, serialize_sequence(res.sequence));
                report.add("sequence", arg_out);
            }
        } else if (asat->parsed()) {
            std::string text = read_file(arg_instance);
            report.input(arg_instance, text);
            auto inst = parse_sat_instance(text);
            SatAlgoConfig cfg;
            cfg.seed = arg_seed;
            if (arg_mode == "random")
                cfg.mode = AlgoMode::random;
            else if (arg_mode == "derand")
                cfg.mode = AlgoMode::derand;
            else
                throw ParseError("--mode must be random or derand");
            auto res = approx_sat_reconfig(inst, cfg);
            int k = inst.formula.k;
            report.add("achieved", rat_line(res.achieved));
            report.add("per_clause_floor", rat_line(res.per_clause_floor));
            report.add("bound", rat_line(res.guarantee_bound));
            report.add("guarantee", rat_line(Rat(1) - Rat(5, 2 * k)));
            if (res.estimator_root) report.add("estimator_root", rat_line(*res.estimator_root));
            if (!arg_out.empty()) {
                write_file(arg_out, serialize_sequence(res.sequence));
                report.add("sequence", arg_out);
            }
        } else if (eval->parsed()) {
            std::string text = read_file(arg_instance);
            std::string seq_text = read_file(arg_sequence);
            report.input(arg_instance, text);
            report.input(arg_sequence, seq_text);
            Rat value;
            if (is_sat_instance(text)) {
                std::vector<EndpointViolation> viols;
                auto inst = parse_sat_instance(text, &viols);
                for (const auto& v : viols)
                    std::cerr << "warning: " << (v.start ? "start" : "end")
                              << " assignment violates clause " << v.clause_index << "\n";
                auto seq = parse_sat_sequence(seq_text, inst.formula.n);
                value = sequence_value(inst, seq);
            } else {
                auto inst = parse_cut_instance(text);
                auto seq = parse_cut_sequence(seq_text, inst.graph.n, inst.k);
                value = sequence_value(inst, seq);
            }
            report.add("value", rat_line(value));
        } else if (tester->parsed()) {
            if (arg_k < 2) throw ParseError("--k must be at least 2");
            std::string text = read_file(arg_input);
            report.input(arg_input, text);
            auto grids = parse_grids(text);
            PairTester t;
            Coloring cfg;
            if (arg_kind == "stripe") {
                if (grids.size() != 1) throw ParseError("stripe tester needs exactly one grid");
                if (grids[0].k != arg_k) throw ParseError("grid side differs from --k");
                t = build_stripe_tester(arg_k);
                cfg = grids[0].flatten();
            } else if (arg_kind == "cons" || arg_kind == "edge") {
                if (grids.size() != 2) throw ParseError("this tester needs exactly two grids");
                if (grids[0].k != arg_k || grids[1].k != arg_k)
                    throw ParseError("grid side differs from --k");
                t = arg_kind == "cons" ? build_consistency_tester(arg_k)
                                       : build_edge_tester(arg_k, parse_rat_flag(arg_rho, "--rho"));
                cfg.k = arg_k;
                cfg.colors = grids[0].cells;
                cfg.colors.insert(cfg.colors.end(), grids[1].cells.begin(), grids[1].cells.end());
            } else {
                throw ParseError("--kind must be stripe, cons, or edge");
            }
            Rat accept = tester_accept_prob(t, cfg);
            report.add("kind", arg_kind);
            report.add("k", std::to_string(arg_k));
            report.add("pairs", std::to_string(t.pairs.size()));
            report.add("accept", rat_line(accept));
            report.add("reject", rat_line(Rat(1) - accept));
        } else if (reduce->parsed()) {
            if (arg_name == "horn-example") {
                if (arg_n < 3) throw ParseError("horn-example needs --n");
                auto inst = horn_example(arg_n);
                write_file(arg_out, serialize_sat_instance(inst));
                report.add("output", arg_out);
                report.add("clauses", std::to_string(inst.formula.m()));
            } else if (arg_name == "crazy" || arg_name == "6to2" || arg_name == "smallk") {
                std::string text = read_file(arg_input);
                report.input(arg_input, text);
                auto inst = parse_cut_instance(text);
                CutReduction red;
                if (arg_name == "crazy") {
                    if (arg_k < 3) throw ParseError("crazy needs --k >= 3");
                    red = reduce_2cut_to_kcut(inst, arg_k, parse_rat_flag(arg_rho, "--rho"),
                                              parse_rat_flag(arg_eps_c, "--eps-c"),
                                              parse_rat_flag(arg_eps_s, "--eps-s"));
                } else if (arg_name == "6to2") {
                    red = reduce_6cut_to_2cut(inst, parse_rat_flag(arg_eps, "--eps"));
                } else {
                    if (arg_k < 3) throw ParseError("smallk needs --k >= 3");
                    red = reduce_2cut_to_kcut_smallk(inst, arg_k, parse_rat_flag(arg_p1, "--p1"),
                                                     parse_rat_flag(arg_eps_c, "--eps-c"),
                                                     parse_rat_flag(arg_eps_s, "--eps-s"));
                }
                std::optional<std::string> wit;
                if (red.witness) wit = serialize_sequence(*red.witness);
                write_reduction_outputs(arg_out, arg_cert, serialize_cut_instance(red.instance),
                                        red.certificate, wit, report);
            } else if (arg_name == "rho" || arg_name == "np" || arg_name == "horn-cnf") {
                std::string text = read_file(arg_input);
                report.input(arg_input, text);
                SatReduction red;
                if (arg_name == "rho") {
                    if (arg_k < 3) throw ParseError("rho needs --k >= 3");
                    auto inst = parse_sat_instance(text);
                    red = reduce_clause_width(inst, arg_k);
                } else if (arg_name == "np") {
                    if (arg_k < 3) throw ParseError("np needs --k >= 3");
                    auto phi = parse_dimacs_cnf(text);
                    red = np_gap_reduction(phi, arg_k, parse_rat_flag(arg_delta, "--delta"));
                } else {
                    auto ncl = parse_andor_instance(text);
                    auto verifier = ncl_verifier(ncl.graph);
                    red = horn_cnf(verifier, arg_lambda, ncl.start, ncl.end,
                                   parse_rat_flag(arg_eps, "--eps"), arg_max_clauses);
                }
                std::optional<std::string> wit;
                if (red.witness) wit = serialize_sequence(*red.witness);
                write_reduction_outputs(arg_out, arg_cert, serialize_sat_instance(red.instance),
                                        red.certificate, wit, report);
            } else {
                throw ParseError("unknown reduction '" + arg_name + "'");
            }
        }
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 4;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }

    report.flush();
    return 0;
}
