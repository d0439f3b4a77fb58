#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reconfig/instances.hpp"
#include "reconfig/rational.hpp"
#include "reconfig/verifiers.hpp"

namespace reconfig {

// Machine-checkable record emitted alongside every reduction: claimed
// parameters are metadata (several hold only asymptotically), completeness
// witnesses are constructed and validated whenever available.
struct ReductionCertificate {
    std::string name;
    std::string input_summary;
    std::string output_summary;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> warnings;
    std::optional<Rat> witness_value;  // exact value of the attached witness
};

std::string serialize_certificate(const ReductionCertificate& cert);

struct CutReduction {
    CutReconfigInstance instance;
    ReductionCertificate certificate;
    std::optional<CutSequence> witness;
};

struct SatReduction {
    SatReconfigInstance instance;
    ReductionCertificate certificate;
    std::optional<SatSequence> witness;
};

// ---------------------------------------------------------------------------
// Pair testers over grid configurations. Grid cell (x, y) maps to flat
// position (y-1)*k + x; two-grid testers place g's block after f's.

PairTester build_stripe_tester(int k);
PairTester build_consistency_tester(int k);
// Mixture of the two stripe tests (weight 2/(rho*Z) each) and the consistency
// test (weight 1/Z), Z = 4/rho + 1.
PairTester build_edge_tester(int k, const Rat& rho);

// One weighted edge per support pair; cut value equals acceptance probability
// exactly for every configuration.
WeightedMultigraph tester_to_graph(const PairTester& t);

// ---------------------------------------------------------------------------
// Gap-preserving reductions

// 2-Cut -> k-Cut via the per-edge edge verifier on striped encodings.
// eps_c/eps_s are the claimed input gap parameters carried into the
// certificate; rho parameterizes the edge tester mixture.
CutReduction reduce_2cut_to_kcut(const CutReconfigInstance& inst, int k_target,
                                 const Rat& rho = Rat(1), const Rat& eps_c = Rat(0),
                                 const Rat& eps_s = Rat(1));

// 6-Cut -> 2-Cut via the four-vertex pair encoding.
CutReduction reduce_6cut_to_2cut(const CutReconfigInstance& inst, const Rat& eps = Rat(1, 2));

std::array<int, 4> encode_color6(int alpha);
std::optional<int> decode_color6(const std::array<int, 4>& bits);

// 2-Cut -> k-Cut for small k: palette blocks Z_v checked against a 3-regular
// expander plus a per-edge palette-anchored test.
CutReduction reduce_2cut_to_kcut_smallk(const CutReconfigInstance& inst, int k_target,
                                        const Rat& p1, const Rat& eps_c = Rat(0),
                                        const Rat& eps_s = Rat(1));

// Deterministic 3-regular graph (cycle plus diameters) with a certified lower
// bound on edge expansion: exhaustive over all cuts for n <= 20, spectral
// bound above that.
std::pair<WeightedMultigraph, Rat> expander_3regular(int n);

// One check per node over its three incident links; accepted views are the
// orientations with inward weight >= 2, minus the forbidden inward pair on
// protected OR nodes.
ExplicitVerifier ncl_verifier(const AndOrGraph& g);

// Horn-style CNF emulation of lambda-round checks: one clause per disjoint
// check tuple and per partial proof that passes the first lambda-1 checks and
// fails the last. `eps` is the claimed soundness gap of the input verifier.
// `groups`, when given, receives (tuple check ids, clause count) per tuple.
SatReduction horn_cnf(const ExplicitVerifier& v, int lambda, const Assignment& start,
                      const Assignment& end, const Rat& eps = Rat(1, 2),
                      std::uint64_t max_clauses = 1u << 20,
                      std::vector<std::pair<std::vector<int>, std::uint64_t>>* groups = nullptr);

// Width reduction via chained implications: every clause wider than k_target
// becomes p = ceil(3*w/k_target) width-k clauses over p-1 fresh variables;
// width-k_target clauses pass through.
SatReduction reduce_clause_width(const SatReconfigInstance& inst, int k_target);

// Max E3-SAT -> Maxmin E-k-SAT Reconfiguration. k >= 5 appends the K = k-3
// Horn clauses over fresh variables; k = 3 and k = 4 use the y/z detour
// constructions (k = 3 yields a mixed {3,4}-width formula).
SatReduction np_gap_reduction(const CnfFormula& phi, int k_target, const Rat& delta = Rat(1, 8));

// All 3*C(n,3) width-3 Horn clauses over n variables, endpoints 0^n and 1^n.
SatReconfigInstance horn_example(int n);

}  // namespace reconfig
