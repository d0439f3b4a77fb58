#include "reconfig/verifiers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

namespace reconfig {

void PairTester::validate() const {
    Rat sum = 0;
    for (const auto& e : pairs) {
        if (e.i < 1 || e.i > positions || e.j < 1 || e.j > positions)
            throw ValidationError("tester pair position out of range");
        if (e.i == e.j) throw ValidationError("tester pair with equal positions");
        if (e.p <= 0) throw ValidationError("tester pair with nonpositive probability");
        sum += e.p;
    }
    if (!pairs.empty() && sum != 1) throw ValidationError("tester probabilities sum to " +
                                                          rat_to_string(sum) + ", not 1");
}

void PairTesterBuilder::add(int i, int j, const Rat& p) {
    if (i > j) std::swap(i, j);
    raw_.push_back({i, j, p});
}

PairTester PairTesterBuilder::build() && {
    std::map<std::pair<int, int>, Rat> merged;
    for (auto& e : raw_) merged[{e.i, e.j}] += e.p;
    PairTester t;
    t.positions = positions_;
    for (auto& [key, p] : merged) t.pairs.push_back({key.first, key.second, p});
    t.validate();
    return t;
}

void ExplicitVerifier::validate() const {
    std::vector<int> deg(static_cast<size_t>(proof_len) + 1, 0);
    double cap = std::pow(2.0, free_bits) + 1e-9;
    for (const auto& c : checks) {
        if (static_cast<int>(c.queries.size()) != q)
            throw ValidationError("check with wrong query count");
        {
            auto qs = c.queries;
            std::sort(qs.begin(), qs.end());
            if (std::adjacent_find(qs.begin(), qs.end()) != qs.end())
                throw ValidationError("check queries a position twice");
        }
        for (int pos : c.queries) {
            if (pos < 1 || pos > proof_len) throw ValidationError("query position out of range");
            ++deg[static_cast<size_t>(pos)];
        }
        if (!std::is_sorted(c.accepted.begin(), c.accepted.end()))
            throw ValidationError("accepted views not sorted");
        for (std::uint32_t view : c.accepted)
            if (q < 32 && view >= (1u << q)) throw ValidationError("accepted view out of range");
        if (static_cast<double>(c.accepted.size()) > cap)
            throw ValidationError("accepted set larger than 2^free_bits");
    }
    for (int pos = 1; pos <= proof_len; ++pos)
        if (deg[static_cast<size_t>(pos)] > degree)
            throw ValidationError("position " + std::to_string(pos) + " queried by " +
                                  std::to_string(deg[static_cast<size_t>(pos)]) +
                                  " checks, degree bound is " + std::to_string(degree));
}

std::vector<std::vector<int>> AndOrGraph::incidence() const {
    std::vector<std::vector<int>> inc(nodes.size() + 1);
    for (size_t l = 0; l < links.size(); ++l) {
        inc[static_cast<size_t>(links[l].u)].push_back(static_cast<int>(l) + 1);
        inc[static_cast<size_t>(links[l].v)].push_back(static_cast<int>(l) + 1);
    }
    return inc;
}

void AndOrGraph::validate() const {
    int n = static_cast<int>(nodes.size());
    for (const auto& l : links) {
        if (l.u < 1 || l.u > n || l.v < 1 || l.v > n)
            throw ValidationError("link endpoint out of range");
        if (l.u == l.v) throw ValidationError("link self-loop");
    }
    auto inc = incidence();
    for (int v = 1; v <= n; ++v) {
        const auto& node = nodes[static_cast<size_t>(v - 1)];
        if (inc[static_cast<size_t>(v)].size() != 3)
            throw ValidationError("node " + std::to_string(v) + " has " +
                                  std::to_string(inc[static_cast<size_t>(v)].size()) +
                                  " incident links, expected 3");
        int reds = 0;
        for (int l : inc[static_cast<size_t>(v)]) reds += links[static_cast<size_t>(l - 1)].red;
        if (node.type == AndOrNodeType::And) {
            if (reds != 2)
                throw ValidationError("AND node " + std::to_string(v) +
                                      " needs two red and one blue link");
        } else {
            if (reds != 0)
                throw ValidationError("OR node " + std::to_string(v) + " needs three blue links");
        }
        if (node.type == AndOrNodeType::ProtectedOr) {
            auto& il = inc[static_cast<size_t>(v)];
            auto has = [&](int l) { return std::find(il.begin(), il.end(), l) != il.end(); };
            if (node.forbidden_a == node.forbidden_b || !has(node.forbidden_a) ||
                !has(node.forbidden_b))
                throw ValidationError("protected OR node " + std::to_string(v) +
                                      " forbidden pair must be two distinct incident links");
        }
    }
}

bool node_satisfied(const AndOrGraph& g, const std::vector<int>& incident_links, int node,
                    const Assignment& orientation) {
    int inweight = 0;
    for (int l : incident_links) {
        const auto& link = g.links[static_cast<size_t>(l - 1)];
        bool toward_v = orientation.bits[static_cast<size_t>(l - 1)] != 0;
        int head = toward_v ? link.v : link.u;
        if (head == node) inweight += link.red ? 1 : 2;
    }
    if (inweight < 2) return false;
    const auto& nd = g.nodes[static_cast<size_t>(node - 1)];
    if (nd.type == AndOrNodeType::ProtectedOr) {
        auto inward = [&](int l) {
            const auto& link = g.links[static_cast<size_t>(l - 1)];
            bool toward_v = orientation.bits[static_cast<size_t>(l - 1)] != 0;
            return (toward_v ? link.v : link.u) == node;
        };
        if (inward(nd.forbidden_a) && inward(nd.forbidden_b)) return false;
    }
    return true;
}

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

AndOrInstance parse_andor_instance(std::string_view text) {
    AndOrInstance inst;
    int n = 0, m = 0;
    bool have_header = false, have_start = false, have_end = false;
    std::vector<bool> node_typed;

    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "p") {
            std::string kind;
            if (!(ls >> kind >> n >> m) || kind != "andor")
                fail(number, "expected 'p andor <#nodes> <#links>'");
            inst.graph.nodes.resize(static_cast<size_t>(n));
            node_typed.assign(static_cast<size_t>(n), false);
            have_header = true;
        } else if (tag == "l") {
            if (!have_header) fail(number, "link before header");
            AndOrLink l;
            std::string color;
            if (!(ls >> l.u >> l.v >> color)) fail(number, "expected 'l <u> <v> <red|blue>'");
            if (color == "red")
                l.red = true;
            else if (color == "blue")
                l.red = false;
            else
                fail(number, "link color must be red or blue");
            inst.graph.links.push_back(l);
        } else if (tag == "n") {
            if (!have_header) fail(number, "node before header");
            int id = 0;
            std::string type;
            if (!(ls >> id >> type)) fail(number, "expected 'n <id> <and|or|por>'");
            if (id < 1 || id > n) fail(number, "node id out of range");
            AndOrNode& node = inst.graph.nodes[static_cast<size_t>(id - 1)];
            if (type == "and")
                node.type = AndOrNodeType::And;
            else if (type == "or")
                node.type = AndOrNodeType::Or;
            else if (type == "por") {
                node.type = AndOrNodeType::ProtectedOr;
                if (!(ls >> node.forbidden_a >> node.forbidden_b))
                    fail(number, "protected OR needs its forbidden link pair");
            } else
                fail(number, "node type must be and, or, or por");
            node_typed[static_cast<size_t>(id - 1)] = true;
        } else if (tag == "s" || tag == "t") {
            std::string bits;
            if (!(ls >> bits)) fail(number, "expected a bitstring");
            Assignment a = Assignment::from_bitstring(bits);
            if (a.n() != m) fail(number, "orientation length differs from link count");
            if (tag == "s") {
                inst.start = std::move(a);
                have_start = true;
            } else {
                inst.end = std::move(a);
                have_end = true;
            }
        } else {
            fail(number, "unrecognized line");
        }
    }
    if (!have_header) throw ParseError("missing 'p andor' header");
    if (static_cast<int>(inst.graph.links.size()) != m)
        throw ParseError("link count differs from header");
    for (int i = 0; i < n; ++i)
        if (!node_typed[static_cast<size_t>(i)])
            throw ParseError("node " + std::to_string(i + 1) + " has no type line");
    if (!have_start || !have_end) throw ParseError("missing start or end orientation");
    inst.graph.validate();
    return inst;
}

std::string serialize_andor_instance(const AndOrInstance& inst) {
    std::ostringstream out;
    out << "p andor " << inst.graph.nodes.size() << " " << inst.graph.links.size() << "\n";
    for (const auto& l : inst.graph.links)
        out << "l " << l.u << " " << l.v << " " << (l.red ? "red" : "blue") << "\n";
    for (size_t i = 0; i < inst.graph.nodes.size(); ++i) {
        const auto& nd = inst.graph.nodes[i];
        out << "n " << (i + 1) << " ";
        switch (nd.type) {
            case AndOrNodeType::And: out << "and"; break;
            case AndOrNodeType::Or: out << "or"; break;
            case AndOrNodeType::ProtectedOr:
                out << "por " << nd.forbidden_a << " " << nd.forbidden_b;
                break;
        }
        out << "\n";
    }
    out << "s " << inst.start.to_bitstring() << "\n";
    out << "t " << inst.end.to_bitstring() << "\n";
    return out.str();
}

}  // namespace reconfig
