#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reconfig/approx_cut.hpp"
#include "reconfig/approx_sat.hpp"
#include "reconfig/exact_solver.hpp"
#include "reconfig/instances.hpp"
#include "reconfig/rational.hpp"
#include "reconfig/reductions.hpp"
#include "reconfig/valuation.hpp"
#include "reconfig/verifiers.hpp"

namespace py = pybind11;

namespace pybind11::detail {

// reconfig::Rat <-> fractions.Fraction (exact in both directions).
template <>
struct type_caster<reconfig::Rat> {
    PYBIND11_TYPE_CASTER(reconfig::Rat, const_name("Fraction"));

    bool load(handle src, bool) {
        try {
            object frac = module_::import("fractions").attr("Fraction")(src);
            std::string num = str(frac.attr("numerator"));
            std::string den = str(frac.attr("denominator"));
            value = reconfig::Rat(reconfig::Int(num), reconfig::Int(den));
            return true;
        } catch (const error_already_set&) {
            return false;
        }
    }

    static handle cast(const reconfig::Rat& r, return_value_policy, handle) {
        object Fraction = module_::import("fractions").attr("Fraction");
        object num = module_::import("builtins").attr("int")(py::str(reconfig::rat_num(r).str()));
        object den = module_::import("builtins").attr("int")(py::str(reconfig::rat_den(r).str()));
        return Fraction(num, den).release();
    }
};

}  // namespace pybind11::detail

namespace {

using namespace reconfig;

AlgoMode mode_from_string(const std::string& mode) {
    if (mode == "random") return AlgoMode::random;
    if (mode == "derand") return AlgoMode::derand;
    throw ValidationError("mode must be 'random' or 'derand'");
}

}  // namespace

PYBIND11_MODULE(_reconfig, m) {
    m.doc() = "maxmin reconfiguration: exact values, approximation algorithms, "
              "verifier gadgets, and gap-preserving reductions";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

    py::class_<WeightedEdge>(m, "WeightedEdge")
        .def(py::init<>())
        .def(py::init([](int u, int v, const Rat& w) { return WeightedEdge{u, v, w}; }))
        .def_readwrite("u", &WeightedEdge::u)
        .def_readwrite("v", &WeightedEdge::v)
        .def_readwrite("w", &WeightedEdge::w);

    py::class_<WeightedMultigraph>(m, "WeightedMultigraph")
        .def(py::init<>())
        .def_readwrite("n", &WeightedMultigraph::n)
        .def_readwrite("edges", &WeightedMultigraph::edges)
        .def("total_weight", &WeightedMultigraph::total_weight)
        .def("validate", &WeightedMultigraph::validate);

    py::class_<Coloring>(m, "Coloring")
        .def(py::init<>())
        .def(py::init([](int k, std::vector<int> colors) {
            return Coloring{k, std::move(colors)};
        }))
        .def_readwrite("k", &Coloring::k)
        .def_readwrite("colors", &Coloring::colors);

    py::class_<Assignment>(m, "Assignment")
        .def(py::init<>())
        .def(py::init([](const std::string& bits) { return Assignment::from_bitstring(bits); }))
        .def_readwrite("bits", &Assignment::bits)
        .def("to_bitstring", &Assignment::to_bitstring);

    py::class_<CnfFormula>(m, "CnfFormula")
        .def(py::init<>())
        .def_readwrite("n", &CnfFormula::n)
        .def_readwrite("k", &CnfFormula::k)
        .def_readwrite("clauses", &CnfFormula::clauses)
        .def_property_readonly("m", &CnfFormula::m);

    py::class_<CutReconfigInstance>(m, "CutReconfigInstance")
        .def(py::init<>())
        .def_readwrite("graph", &CutReconfigInstance::graph)
        .def_readwrite("k", &CutReconfigInstance::k)
        .def_readwrite("start", &CutReconfigInstance::start)
        .def_readwrite("end", &CutReconfigInstance::end)
        .def("validate", &CutReconfigInstance::validate);

    py::class_<SatReconfigInstance>(m, "SatReconfigInstance")
        .def(py::init<>())
        .def_readwrite("formula", &SatReconfigInstance::formula)
        .def_readwrite("start", &SatReconfigInstance::start)
        .def_readwrite("end", &SatReconfigInstance::end)
        .def("validate", &SatReconfigInstance::validate);

    py::class_<CutSequence>(m, "CutSequence")
        .def(py::init<>())
        .def_readwrite("steps", &CutSequence::steps);

    py::class_<SatSequence>(m, "SatSequence")
        .def(py::init<>())
        .def_readwrite("steps", &SatSequence::steps);

    py::class_<GridColoring>(m, "GridColoring")
        .def(py::init([](int k, std::vector<int> cells) {
            GridColoring g;
            g.k = k;
            g.cells = std::move(cells);
            g.validate();
            return g;
        }))
        .def_readwrite("k", &GridColoring::k)
        .def_readwrite("cells", &GridColoring::cells)
        .def("at", static_cast<int (GridColoring::*)(int, int) const>(&GridColoring::at))
        .def("transposed", &GridColoring::transposed)
        .def("flatten", &GridColoring::flatten)
        .def_static("horizontally_striped", &GridColoring::horizontally_striped)
        .def_static("vertically_striped", &GridColoring::vertically_striped);

    py::class_<StripeReport>(m, "StripeReport")
        .def_readonly("dist_h", &StripeReport::dist_h)
        .def_readonly("dist_v", &StripeReport::dist_v)
        .def_readonly("eps", &StripeReport::eps)
        .def_readonly("dec", &StripeReport::dec)
        .def_readonly("sigma", &StripeReport::sigma);

    py::class_<PairTester::Entry>(m, "PairTesterEntry")
        .def_readonly("i", &PairTester::Entry::i)
        .def_readonly("j", &PairTester::Entry::j)
        .def_readonly("p", &PairTester::Entry::p);

    py::class_<PairTester>(m, "PairTester")
        .def_readonly("positions", &PairTester::positions)
        .def_readonly("pairs", &PairTester::pairs);

    py::class_<VerifierCheck>(m, "VerifierCheck")
        .def_readonly("queries", &VerifierCheck::queries)
        .def_readonly("accepted", &VerifierCheck::accepted);

    py::class_<ExplicitVerifier>(m, "ExplicitVerifier")
        .def_readonly("proof_len", &ExplicitVerifier::proof_len)
        .def_readonly("q", &ExplicitVerifier::q)
        .def_readonly("checks", &ExplicitVerifier::checks)
        .def_readonly("free_bits", &ExplicitVerifier::free_bits)
        .def_readonly("degree", &ExplicitVerifier::degree);

    py::class_<CutExactResult>(m, "CutExactResult")
        .def_readonly("opt", &CutExactResult::opt)
        .def_readonly("witness", &CutExactResult::witness)
        .def_readonly("explored", &CutExactResult::explored);

    py::class_<SatExactResult>(m, "SatExactResult")
        .def_readonly("opt", &SatExactResult::opt)
        .def_readonly("witness", &SatExactResult::witness)
        .def_readonly("explored", &SatExactResult::explored);

    py::class_<CutApproxResult>(m, "CutApproxResult")
        .def_readonly("sequence", &CutApproxResult::sequence)
        .def_readonly("achieved", &CutApproxResult::achieved)
        .def_readonly("guarantee_factor", &CutApproxResult::guarantee_factor)
        .def_readonly("guarantee_bound", &CutApproxResult::guarantee_bound)
        .def_readonly("estimator_root", &CutApproxResult::estimator_root)
        .def_readonly("high_prob_regime", &CutApproxResult::high_prob_regime)
        .def_readonly("notes", &CutApproxResult::notes);

    py::class_<SatApproxResult>(m, "SatApproxResult")
        .def_readonly("sequence", &SatApproxResult::sequence)
        .def_readonly("achieved", &SatApproxResult::achieved)
        .def_readonly("guarantee_bound", &SatApproxResult::guarantee_bound)
        .def_readonly("per_clause_floor", &SatApproxResult::per_clause_floor)
        .def_readonly("estimator_root", &SatApproxResult::estimator_root);

    py::class_<ReductionCertificate>(m, "ReductionCertificate")
        .def_readonly("name", &ReductionCertificate::name)
        .def_readonly("input_summary", &ReductionCertificate::input_summary)
        .def_readonly("output_summary", &ReductionCertificate::output_summary)
        .def_readonly("params", &ReductionCertificate::params)
        .def_readonly("warnings", &ReductionCertificate::warnings)
        .def_readonly("witness_value", &ReductionCertificate::witness_value);

    py::class_<CutReduction>(m, "CutReduction")
        .def_readonly("instance", &CutReduction::instance)
        .def_readonly("certificate", &CutReduction::certificate)
        .def_readonly("witness", &CutReduction::witness);

    py::class_<SatReduction>(m, "SatReduction")
        .def_readonly("instance", &SatReduction::instance)
        .def_readonly("certificate", &SatReduction::certificate)
        .def_readonly("witness", &SatReduction::witness);

    py::enum_<FlipOrder>(m, "FlipOrder")
        .value("uniform", FlipOrder::uniform)
        .value("u_first", FlipOrder::u_first)
        .value("v_first", FlipOrder::v_first);

    // Parsing and serialization.
    m.def("parse_cut_instance", [](const std::string& s) { return parse_cut_instance(s); });
    m.def("parse_sat_instance", [](const std::string& s) { return parse_sat_instance(s); });
    m.def("serialize_cut_instance", &serialize_cut_instance);
    m.def("serialize_sat_instance", &serialize_sat_instance);
    m.def("parse_cut_sequence",
          [](const std::string& s, int n, int k) { return parse_cut_sequence(s, n, k); });
    m.def("parse_sat_sequence",
          [](const std::string& s, int n) { return parse_sat_sequence(s, n); });
    m.def("serialize_cut_sequence",
          static_cast<std::string (*)(const CutSequence&)>(&serialize_sequence));
    m.def("serialize_sat_sequence",
          static_cast<std::string (*)(const SatSequence&)>(&serialize_sequence));
    m.def("parse_dimacs_cnf", [](const std::string& s) { return parse_dimacs_cnf(s); });
    m.def("expand_unit_multiplicity", &expand_unit_multiplicity, py::arg("graph"),
          py::arg("max_edges") = 1u << 20);

    // Values.
    m.def("cut_value", &cut_value);
    m.def("sat_value", &sat_value);
    m.def("cut_sequence_value",
          static_cast<Rat (*)(const CutReconfigInstance&, const CutSequence&)>(&sequence_value));
    m.def("sat_sequence_value",
          static_cast<Rat (*)(const SatReconfigInstance&, const SatSequence&)>(&sequence_value));
    m.def("stripe_report", &stripe_report);
    m.def("stripe_reject_prob", &stripe_reject_prob);
    m.def("tester_accept_prob", &tester_accept_prob);
    m.def("explicit_verifier_accept_prob", &explicit_verifier_accept_prob);

    // Exact solving.
    m.def("opt_cut_exact", &opt_cut_exact, py::arg("instance"), py::arg("budget") = 1u << 20,
          py::arg("threads") = 1);
    m.def("opt_sat_exact", &opt_sat_exact, py::arg("instance"), py::arg("budget") = 1u << 20,
          py::arg("threads") = 1);

    // Approximation algorithms.
    m.def(
        "approx_cut_reconfig",
        [](const CutReconfigInstance& inst, std::uint64_t seed, const std::string& mode,
           const Rat& epsilon) {
            CutAlgoConfig cfg;
            cfg.seed = seed;
            cfg.mode = mode_from_string(mode);
            cfg.epsilon = epsilon;
            return approx_cut_reconfig(inst, cfg);
        },
        py::arg("instance"), py::arg("seed") = 0, py::arg("mode") = "derand",
        py::arg("epsilon") = Rat(0));
    m.def(
        "approx_sat_reconfig",
        [](const SatReconfigInstance& inst, std::uint64_t seed, const std::string& mode) {
            SatAlgoConfig cfg;
            cfg.seed = seed;
            cfg.mode = mode_from_string(mode);
            return approx_sat_reconfig(inst, cfg);
        },
        py::arg("instance"), py::arg("seed") = 0, py::arg("mode") = "derand");
    m.def("edge_survival_prob", &edge_survival_prob, py::arg("k"), py::arg("start"),
          py::arg("target") = std::nullopt, py::arg("order") = FlipOrder::uniform);
    m.def("uplift_low_value", &uplift_low_value);
    m.def("binom_sum", &binom_sum);
    m.def("clause_survival_prob", &clause_survival_prob);

    // Testers and reductions.
    m.def("build_stripe_tester", &build_stripe_tester);
    m.def("build_consistency_tester", &build_consistency_tester);
    m.def("build_edge_tester", &build_edge_tester, py::arg("k"), py::arg("rho") = Rat(1));
    m.def("tester_to_graph", &tester_to_graph);
    m.def("reduce_2cut_to_kcut", &reduce_2cut_to_kcut, py::arg("instance"), py::arg("k_target"),
          py::arg("rho") = Rat(1), py::arg("eps_c") = Rat(0), py::arg("eps_s") = Rat(1));
    m.def("reduce_6cut_to_2cut", &reduce_6cut_to_2cut, py::arg("instance"),
          py::arg("eps") = Rat(1, 2));
    m.def("reduce_2cut_to_kcut_smallk", &reduce_2cut_to_kcut_smallk, py::arg("instance"),
          py::arg("k_target"), py::arg("p1"), py::arg("eps_c") = Rat(0),
          py::arg("eps_s") = Rat(1));
    m.def("expander_3regular", &expander_3regular);
    m.def("horn_example", &horn_example);
    m.def("np_gap_reduction", &np_gap_reduction, py::arg("phi"), py::arg("k_target"),
          py::arg("delta") = Rat(1, 8));
    m.def("reduce_clause_width", &reduce_clause_width);
    m.def(
        "horn_cnf",
        [](const ExplicitVerifier& v, int lambda, const Assignment& start, const Assignment& end,
           const Rat& eps, std::uint64_t max_clauses) {
            return horn_cnf(v, lambda, start, end, eps, max_clauses);
        },
        py::arg("verifier"), py::arg("lam"), py::arg("start"), py::arg("end"),
        py::arg("eps") = Rat(1, 2), py::arg("max_clauses") = 1u << 20);
    m.def("parse_andor_instance", [](const std::string& s) {
        auto inst = parse_andor_instance(s);
        return py::make_tuple(inst.graph, inst.start, inst.end);
    });
    m.def("ncl_verifier", &ncl_verifier);
    m.def("serialize_certificate", &serialize_certificate);

    py::class_<AndOrGraph>(m, "AndOrGraph");
}
