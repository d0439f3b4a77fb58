#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reconfig/rational.hpp"

namespace reconfig {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Graphs and colorings

struct WeightedEdge {
    int u = 0;
    int v = 0;
    Rat w;
};

// Undirected multigraph; parallel edges are repeated entries or, equivalently,
// merged rational weights. Vertices are 1..n.
struct WeightedMultigraph {
    int n = 0;
    std::vector<WeightedEdge> edges;

    Rat total_weight() const;
    // Number of edge entries incident to each vertex (parallel entries count).
    std::vector<int> entry_degrees() const;
    void validate() const;
};

// Expands rational weights into unit-weight parallel edges over the common
// denominator. Refuses (BudgetError) if the expansion exceeds max_edges.
WeightedMultigraph expand_unit_multiplicity(const WeightedMultigraph& g,
                                            std::uint64_t max_edges = 1u << 20);

struct Coloring {
    int k = 0;
    std::vector<int> colors;  // values in 1..k

    int n() const { return static_cast<int>(colors.size()); }
    void validate() const;
};

// ---------------------------------------------------------------------------
// CNF formulas and assignments

struct CnfFormula {
    int n = 0;  // variable count
    int k = 0;  // clause width; 0 = mixed width
    std::vector<std::vector<int>> clauses;  // nonzero signed 1-based literals

    int m() const { return static_cast<int>(clauses.size()); }
    void validate() const;
};

struct Assignment {
    std::vector<std::uint8_t> bits;

    int n() const { return static_cast<int>(bits.size()); }
    std::string to_bitstring() const;
    static Assignment from_bitstring(std::string_view s);
};

bool clause_satisfied(const std::vector<int>& clause, const Assignment& a);

// ---------------------------------------------------------------------------
// Reconfiguration instances

struct CutReconfigInstance {
    WeightedMultigraph graph;
    int k = 0;
    Coloring start;
    Coloring end;

    void validate() const;
};

struct SatReconfigInstance {
    CnfFormula formula;
    Assignment start;
    Assignment end;

    void validate() const;  // structural only; endpoint satisfaction is separate
};

struct EndpointViolation {
    bool start = true;    // false = end endpoint
    int clause_index = 0; // 1-based
};

std::vector<EndpointViolation> endpoint_violations(const SatReconfigInstance& inst);

// ---------------------------------------------------------------------------
// Sequences

struct CutSequence {
    std::vector<Coloring> steps;
};

struct SatSequence {
    std::vector<Assignment> steps;
};

// Step invariant only: nonempty, uniform shape, adjacent Hamming distance <= 1.
// Errors name the offending step index (1-based).
void validate_sequence_steps(const CutSequence& seq, int n, int k);
void validate_sequence_steps(const SatSequence& seq, int n);

// Step invariant plus endpoint match against the instance.
void validate_sequence(const CutReconfigInstance& inst, const CutSequence& seq);
void validate_sequence(const SatReconfigInstance& inst, const SatSequence& seq);

// ---------------------------------------------------------------------------
// File formats (line oriented, '#' comments)
//
//   p cutreconf <n> <k>      p satreconf <n> <m> <k>
//   e <u> <v> <num>/<den>    <lit> ... 0   (m clause lines)
//   s <c1> ... <cn>          s <bitstring>
//   t <c1> ... <cn>          t <bitstring>
//
// Sequence files hold one configuration per line (colors or a bitstring).

CutReconfigInstance parse_cut_instance(std::string_view text);

// With violations == nullptr, an endpoint violating a clause is a ParseError
// naming the clause; otherwise violations are collected and parsing succeeds.
SatReconfigInstance parse_sat_instance(std::string_view text,
                                       std::vector<EndpointViolation>* violations = nullptr);

std::string serialize_cut_instance(const CutReconfigInstance& inst);
std::string serialize_sat_instance(const SatReconfigInstance& inst);

CutSequence parse_cut_sequence(std::string_view text, int n, int k);
SatSequence parse_sat_sequence(std::string_view text, int n);
std::string serialize_sequence(const CutSequence& seq);
std::string serialize_sequence(const SatSequence& seq);

// DIMACS "p cnf <n> <m>" parser; used as reduction input.
CnfFormula parse_dimacs_cnf(std::string_view text);

}  // namespace reconfig
