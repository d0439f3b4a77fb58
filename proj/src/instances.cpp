#include "reconfig/instances.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace reconfig {

namespace {

// Splits into lines, strips '#' comments and trailing whitespace, and keeps
// 1-based line numbers for diagnostics.
struct Line {
    int number;
    std::string text;
};

std::vector<Line> significant_lines(std::string_view text) {
    std::vector<Line> out;
    int number = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        ++number;
        std::string line(raw);
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
        size_t first = 0;
        while (first < line.size() && std::isspace(static_cast<unsigned char>(line[first]))) ++first;
        line.erase(0, first);
        if (!line.empty()) out.push_back({number, std::move(line)});
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg);
}

int parse_int_tok(const std::string& t, int line, const char* what) {
    try {
        size_t used = 0;
        long v = std::stol(t, &used);
        if (used != t.size()) throw std::invalid_argument("");
        return static_cast<int>(v);
    } catch (...) {
        fail(line, std::string("malformed ") + what + " '" + t + "'");
    }
}

}  // namespace

// ---------------------------------------------------------------------------

Rat WeightedMultigraph::total_weight() const {
    Rat w = 0;
    for (const auto& e : edges) w += e.w;
    return w;
}

std::vector<int> WeightedMultigraph::entry_degrees() const {
    std::vector<int> d(static_cast<size_t>(n) + 1, 0);
    for (const auto& e : edges) {
        ++d[static_cast<size_t>(e.u)];
        ++d[static_cast<size_t>(e.v)];
    }
    return d;
}

void WeightedMultigraph::validate() const {
    if (n < 0) throw ValidationError("negative vertex count");
    for (const auto& e : edges) {
        if (e.u < 1 || e.u > n || e.v < 1 || e.v > n)
            throw ValidationError("edge endpoint out of range");
        if (e.u == e.v) throw ValidationError("self-loop");
        if (e.w < 0) throw ValidationError("negative edge weight");
    }
    if (!edges.empty() && total_weight() <= 0)
        throw ValidationError("nonempty edge list with zero total weight");
}

WeightedMultigraph expand_unit_multiplicity(const WeightedMultigraph& g, std::uint64_t max_edges) {
    Int lcm = 1;
    for (const auto& e : g.edges) lcm = boost::multiprecision::lcm(lcm, rat_den(e.w));
    Int count = 0;
    for (const auto& e : g.edges) count += rat_num(e.w) * (lcm / rat_den(e.w));
    if (count > max_edges)
        throw BudgetError("unit-multiplicity expansion needs " + count.str() +
                          " edges, exceeding the cap of " + std::to_string(max_edges));
    WeightedMultigraph out;
    out.n = g.n;
    for (const auto& e : g.edges) {
        Int mult = rat_num(e.w) * (lcm / rat_den(e.w));
        for (Int i = 0; i < mult; ++i) out.edges.push_back({e.u, e.v, Rat(1)});
    }
    return out;
}

void Coloring::validate() const {
    if (k < 1) throw ValidationError("color count must be positive");
    for (int c : colors)
        if (c < 1 || c > k) throw ValidationError("color out of range");
}

void CnfFormula::validate() const {
    if (n < 0) throw ValidationError("negative variable count");
    for (size_t j = 0; j < clauses.size(); ++j) {
        const auto& cl = clauses[j];
        if (k > 0 && static_cast<int>(cl.size()) != k)
            throw ValidationError("clause " + std::to_string(j + 1) + " has width " +
                                  std::to_string(cl.size()) + ", expected " + std::to_string(k));
        std::vector<int> vars;
        for (int lit : cl) {
            if (lit == 0 || std::abs(lit) > n)
                throw ValidationError("clause " + std::to_string(j + 1) + " has literal out of range");
            vars.push_back(std::abs(lit));
        }
        std::sort(vars.begin(), vars.end());
        if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
            throw ValidationError("clause " + std::to_string(j + 1) + " repeats a variable");
    }
}

std::string Assignment::to_bitstring() const {
    std::string s(bits.size(), '0');
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

Assignment Assignment::from_bitstring(std::string_view s) {
    Assignment a;
    a.bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw ParseError("bitstring contains '" + std::string(1, c) + "'");
        a.bits.push_back(c == '1');
    }
    return a;
}

bool clause_satisfied(const std::vector<int>& clause, const Assignment& a) {
    for (int lit : clause) {
        int var = std::abs(lit);
        bool v = a.bits[static_cast<size_t>(var - 1)] != 0;
        if ((lit > 0) == v) return true;
    }
    return false;
}

void CutReconfigInstance::validate() const {
    graph.validate();
    if (k < 1) throw ValidationError("k must be positive");
    if (start.k != k || end.k != k) throw ValidationError("endpoint color count differs from k");
    if (start.n() != graph.n || end.n() != graph.n)
        throw ValidationError("endpoint coloring length differs from vertex count");
    start.validate();
    end.validate();
}

void SatReconfigInstance::validate() const {
    formula.validate();
    if (start.n() != formula.n || end.n() != formula.n)
        throw ValidationError("endpoint assignment length differs from variable count");
}

std::vector<EndpointViolation> endpoint_violations(const SatReconfigInstance& inst) {
    std::vector<EndpointViolation> out;
    for (int j = 0; j < inst.formula.m(); ++j) {
        if (!clause_satisfied(inst.formula.clauses[static_cast<size_t>(j)], inst.start))
            out.push_back({true, j + 1});
        if (!clause_satisfied(inst.formula.clauses[static_cast<size_t>(j)], inst.end))
            out.push_back({false, j + 1});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sequence validation

void validate_sequence_steps(const CutSequence& seq, int n, int k) {
    if (seq.steps.empty()) throw ValidationError("empty sequence");
    for (size_t t = 0; t < seq.steps.size(); ++t) {
        const auto& c = seq.steps[t];
        if (c.k != k || c.n() != n)
            throw ValidationError("step " + std::to_string(t + 1) + ": shape mismatch");
        c.validate();
        if (t > 0) {
            int diff = 0;
            for (int i = 0; i < n; ++i)
                diff += seq.steps[t - 1].colors[static_cast<size_t>(i)] != c.colors[static_cast<size_t>(i)];
            if (diff > 1)
                throw ValidationError("step " + std::to_string(t + 1) +
                                      ": differs from previous step in " + std::to_string(diff) +
                                      " vertices");
        }
    }
}

void validate_sequence_steps(const SatSequence& seq, int n) {
    if (seq.steps.empty()) throw ValidationError("empty sequence");
    for (size_t t = 0; t < seq.steps.size(); ++t) {
        const auto& a = seq.steps[t];
        if (a.n() != n) throw ValidationError("step " + std::to_string(t + 1) + ": shape mismatch");
        if (t > 0) {
            int diff = 0;
            for (int i = 0; i < n; ++i)
                diff += seq.steps[t - 1].bits[static_cast<size_t>(i)] != a.bits[static_cast<size_t>(i)];
            if (diff > 1)
                throw ValidationError("step " + std::to_string(t + 1) +
                                      ": differs from previous step in " + std::to_string(diff) +
                                      " variables");
        }
    }
}

void validate_sequence(const CutReconfigInstance& inst, const CutSequence& seq) {
    validate_sequence_steps(seq, inst.graph.n, inst.k);
    if (seq.steps.front().colors != inst.start.colors)
        throw ValidationError("step 1: does not match the start coloring");
    if (seq.steps.back().colors != inst.end.colors)
        throw ValidationError("step " + std::to_string(seq.steps.size()) +
                              ": does not match the end coloring");
}

void validate_sequence(const SatReconfigInstance& inst, const SatSequence& seq) {
    validate_sequence_steps(seq, inst.formula.n);
    if (seq.steps.front().bits != inst.start.bits)
        throw ValidationError("step 1: does not match the start assignment");
    if (seq.steps.back().bits != inst.end.bits)
        throw ValidationError("step " + std::to_string(seq.steps.size()) +
                              ": does not match the end assignment");
}

// ---------------------------------------------------------------------------
// Parsing

CutReconfigInstance parse_cut_instance(std::string_view text) {
    auto lines = significant_lines(text);
    if (lines.empty()) throw ParseError("empty instance file");

    CutReconfigInstance inst;
    bool have_header = false, have_start = false, have_end = false;

    for (const auto& ln : lines) {
        auto tok = tokens(ln.text);
        if (tok[0] == "p") {
            if (have_header) fail(ln.number, "duplicate header");
            if (tok.size() != 4 || tok[1] != "cutreconf") fail(ln.number, "expected 'p cutreconf <n> <k>'");
            inst.graph.n = parse_int_tok(tok[2], ln.number, "vertex count");
            inst.k = parse_int_tok(tok[3], ln.number, "color count");
            if (inst.graph.n < 1) fail(ln.number, "vertex count must be positive");
            if (inst.k < 1) fail(ln.number, "color count must be positive");
            have_header = true;
        } else if (tok[0] == "e") {
            if (!have_header) fail(ln.number, "edge before header");
            if (tok.size() != 4) fail(ln.number, "expected 'e <u> <v> <num>/<den>'");
            WeightedEdge e;
            e.u = parse_int_tok(tok[1], ln.number, "vertex");
            e.v = parse_int_tok(tok[2], ln.number, "vertex");
            try {
                e.w = parse_rational(tok[3]);
            } catch (const std::exception&) {
                fail(ln.number, "malformed weight '" + tok[3] + "'");
            }
            if (e.u < 1 || e.u > inst.graph.n || e.v < 1 || e.v > inst.graph.n)
                fail(ln.number, "edge endpoint out of range 1.." + std::to_string(inst.graph.n));
            if (e.u == e.v) fail(ln.number, "self-loop");
            if (e.w < 0) fail(ln.number, "negative weight");
            inst.graph.edges.push_back(std::move(e));
        } else if (tok[0] == "s" || tok[0] == "t") {
            if (!have_header) fail(ln.number, "coloring before header");
            if (static_cast<int>(tok.size()) != inst.graph.n + 1)
                fail(ln.number, "expected " + std::to_string(inst.graph.n) + " colors");
            Coloring c;
            c.k = inst.k;
            for (int i = 1; i <= inst.graph.n; ++i) {
                int col = parse_int_tok(tok[static_cast<size_t>(i)], ln.number, "color");
                if (col < 1 || col > inst.k)
                    fail(ln.number, "color " + std::to_string(col) + " out of range 1.." +
                                        std::to_string(inst.k));
                c.colors.push_back(col);
            }
            if (tok[0] == "s") {
                if (have_start) fail(ln.number, "duplicate start coloring");
                inst.start = std::move(c);
                have_start = true;
            } else {
                if (have_end) fail(ln.number, "duplicate end coloring");
                inst.end = std::move(c);
                have_end = true;
            }
        } else {
            fail(ln.number, "unrecognized line '" + ln.text + "'");
        }
    }
    if (!have_header) throw ParseError("missing 'p cutreconf' header");
    if (!have_start) throw ParseError("missing start coloring ('s' line)");
    if (!have_end) throw ParseError("missing end coloring ('t' line)");
    inst.validate();
    return inst;
}

SatReconfigInstance parse_sat_instance(std::string_view text,
                                       std::vector<EndpointViolation>* violations) {
    auto lines = significant_lines(text);
    if (lines.empty()) throw ParseError("empty instance file");

    SatReconfigInstance inst;
    int expected_m = 0;
    bool have_header = false, have_start = false, have_end = false;
    int header_line = 0;

    for (const auto& ln : lines) {
        auto tok = tokens(ln.text);
        if (tok[0] == "p") {
            if (have_header) fail(ln.number, "duplicate header");
            if (tok.size() != 5 || tok[1] != "satreconf")
                fail(ln.number, "expected 'p satreconf <n> <m> <k>'");
            inst.formula.n = parse_int_tok(tok[2], ln.number, "variable count");
            expected_m = parse_int_tok(tok[3], ln.number, "clause count");
            inst.formula.k = parse_int_tok(tok[4], ln.number, "clause width");
            if (inst.formula.n < 1) fail(ln.number, "variable count must be positive");
            if (expected_m < 0 || inst.formula.k < 0) fail(ln.number, "negative count");
            have_header = true;
            header_line = ln.number;
        } else if (tok[0] == "s" || tok[0] == "t") {
            if (!have_header) fail(ln.number, "endpoint before header");
            if (tok.size() != 2) fail(ln.number, "expected a single bitstring");
            Assignment a;
            try {
                a = Assignment::from_bitstring(tok[1]);
            } catch (const ParseError& e) {
                fail(ln.number, e.what());
            }
            if (a.n() != inst.formula.n)
                fail(ln.number, "bitstring length " + std::to_string(a.n()) + ", expected " +
                                    std::to_string(inst.formula.n));
            if (tok[0] == "s") {
                if (have_start) fail(ln.number, "duplicate start assignment");
                inst.start = std::move(a);
                have_start = true;
            } else {
                if (have_end) fail(ln.number, "duplicate end assignment");
                inst.end = std::move(a);
                have_end = true;
            }
        } else {
            if (!have_header) fail(ln.number, "clause before header");
            std::vector<int> clause;
            bool terminated = false;
            for (const auto& t : tok) {
                int lit = parse_int_tok(t, ln.number, "literal");
                if (lit == 0) {
                    terminated = true;
                    break;
                }
                clause.push_back(lit);
            }
            if (!terminated) fail(ln.number, "clause not terminated by 0");
            if (clause.empty()) fail(ln.number, "empty clause");
            for (int lit : clause)
                if (std::abs(lit) > inst.formula.n)
                    fail(ln.number, "literal " + std::to_string(lit) + " out of range");
            std::vector<int> vars;
            for (int lit : clause) vars.push_back(std::abs(lit));
            std::sort(vars.begin(), vars.end());
            if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
                fail(ln.number, "duplicate variable in clause");
            if (inst.formula.k > 0 && static_cast<int>(clause.size()) != inst.formula.k)
                fail(ln.number, "clause width " + std::to_string(clause.size()) + ", expected " +
                                    std::to_string(inst.formula.k));
            inst.formula.clauses.push_back(std::move(clause));
        }
    }
    if (!have_header) throw ParseError("missing 'p satreconf' header");
    if (!have_start) throw ParseError("missing start assignment ('s' line)");
    if (!have_end) throw ParseError("missing end assignment ('t' line)");
    if (inst.formula.m() != expected_m)
        fail(header_line, "header promises " + std::to_string(expected_m) + " clauses, found " +
                              std::to_string(inst.formula.m()));
    inst.validate();

    auto viols = endpoint_violations(inst);
    if (violations) {
        *violations = std::move(viols);
    } else if (!viols.empty()) {
        const auto& v = viols.front();
        throw ParseError(std::string(v.start ? "start" : "end") + " assignment violates clause " +
                         std::to_string(v.clause_index));
    }
    return inst;
}

std::string serialize_cut_instance(const CutReconfigInstance& inst) {
    std::ostringstream out;
    out << "p cutreconf " << inst.graph.n << " " << inst.k << "\n";
    for (const auto& e : inst.graph.edges)
        out << "e " << e.u << " " << e.v << " " << rat_to_fraction_string(e.w) << "\n";
    auto emit = [&](char tag, const Coloring& c) {
        out << tag;
        for (int col : c.colors) out << " " << col;
        out << "\n";
    };
    emit('s', inst.start);
    emit('t', inst.end);
    return out.str();
}

std::string serialize_sat_instance(const SatReconfigInstance& inst) {
    std::ostringstream out;
    out << "p satreconf " << inst.formula.n << " " << inst.formula.m() << " " << inst.formula.k
        << "\n";
    for (const auto& cl : inst.formula.clauses) {
        for (int lit : cl) out << lit << " ";
        out << "0\n";
    }
    out << "s " << inst.start.to_bitstring() << "\n";
    out << "t " << inst.end.to_bitstring() << "\n";
    return out.str();
}

CutSequence parse_cut_sequence(std::string_view text, int n, int k) {
    CutSequence seq;
    for (const auto& ln : significant_lines(text)) {
        auto tok = tokens(ln.text);
        if (static_cast<int>(tok.size()) != n)
            fail(ln.number, "expected " + std::to_string(n) + " colors");
        Coloring c;
        c.k = k;
        for (const auto& t : tok) {
            int col = parse_int_tok(t, ln.number, "color");
            if (col < 1 || col > k) fail(ln.number, "color out of range");
            c.colors.push_back(col);
        }
        seq.steps.push_back(std::move(c));
    }
    if (seq.steps.empty()) throw ParseError("empty sequence file");
    return seq;
}

SatSequence parse_sat_sequence(std::string_view text, int n) {
    SatSequence seq;
    for (const auto& ln : significant_lines(text)) {
        auto tok = tokens(ln.text);
        if (tok.size() != 1) fail(ln.number, "expected a single bitstring");
        Assignment a;
        try {
            a = Assignment::from_bitstring(tok[0]);
        } catch (const ParseError& e) {
            fail(ln.number, e.what());
        }
        if (a.n() != n) fail(ln.number, "bitstring length mismatch");
        seq.steps.push_back(std::move(a));
    }
    if (seq.steps.empty()) throw ParseError("empty sequence file");
    return seq;
}

std::string serialize_sequence(const CutSequence& seq) {
    std::ostringstream out;
    for (const auto& c : seq.steps) {
        for (size_t i = 0; i < c.colors.size(); ++i) out << (i ? " " : "") << c.colors[i];
        out << "\n";
    }
    return out.str();
}

std::string serialize_sequence(const SatSequence& seq) {
    std::ostringstream out;
    for (const auto& a : seq.steps) out << a.to_bitstring() << "\n";
    return out.str();
}

CnfFormula parse_dimacs_cnf(std::string_view text) {
    CnfFormula f;
    int expected_m = -1;
    for (const auto& ln : significant_lines(text)) {
        auto tok = tokens(ln.text);
        if (tok[0] == "c") continue;
        if (tok[0] == "p") {
            if (tok.size() != 4 || tok[1] != "cnf") fail(ln.number, "expected 'p cnf <n> <m>'");
            f.n = parse_int_tok(tok[2], ln.number, "variable count");
            expected_m = parse_int_tok(tok[3], ln.number, "clause count");
            continue;
        }
        if (expected_m < 0) fail(ln.number, "clause before header");
        std::vector<int> clause;
        for (const auto& t : tok) {
            int lit = parse_int_tok(t, ln.number, "literal");
            if (lit == 0) break;
            clause.push_back(lit);
        }
        if (clause.empty()) fail(ln.number, "empty clause");
        f.clauses.push_back(std::move(clause));
    }
    if (expected_m < 0) throw ParseError("missing 'p cnf' header");
    if (f.m() != expected_m) throw ParseError("clause count differs from header");
    // Uniform width is recorded when present; mixed width stays 0.
    if (!f.clauses.empty()) {
        size_t w = f.clauses.front().size();
        bool uniform = true;
        for (const auto& cl : f.clauses) uniform = uniform && cl.size() == w;
        f.k = uniform ? static_cast<int>(w) : 0;
    }
    f.validate();
    return f;
}

}  // namespace reconfig
