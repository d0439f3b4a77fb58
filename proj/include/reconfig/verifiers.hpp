#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "reconfig/instances.hpp"
#include "reconfig/rational.hpp"

namespace reconfig {

// A finitely-supported distribution over position pairs; the test accepts a
// configuration iff the two sampled positions carry different colors.
struct PairTester {
    int positions = 0;
    struct Entry {
        int i = 0;  // 1-based positions, i < j
        int j = 0;
        Rat p;
    };
    std::vector<Entry> pairs;

    void validate() const;  // sum(p) == 1, i != j, p > 0
};

// Builder that merges duplicate pairs and normalizes i < j.
class PairTesterBuilder {
public:
    explicit PairTesterBuilder(int positions) : positions_(positions) {}
    void add(int i, int j, const Rat& p);
    PairTester build() &&;

private:
    int positions_;
    std::vector<PairTester::Entry> raw_;
};

// A finite list of equiprobable checks; each check reads q proof positions and
// accepts the local views listed in `accepted`. View encoding: bit t holds the
// proof value at queries[t].
struct VerifierCheck {
    std::vector<int> queries;             // 1-based proof positions
    std::vector<std::uint32_t> accepted;  // sorted q-bit views
};

struct ExplicitVerifier {
    int proof_len = 0;
    int q = 0;
    std::vector<VerifierCheck> checks;
    double free_bits = 0.0;  // metadata: every accepted set has size <= 2^free_bits
    int degree = 0;          // metadata: each position appears in <= degree checks

    void validate() const;
};

// ---------------------------------------------------------------------------
// AND/OR constraint graphs (nondeterministic constraint logic toys)

enum class AndOrNodeType { And, Or, ProtectedOr };

struct AndOrLink {
    int u = 0;  // 1-based node ids
    int v = 0;
    bool red = false;  // red weight 1, blue weight 2
};

struct AndOrNode {
    AndOrNodeType type = AndOrNodeType::Or;
    // Protected OR: the two incident links (1-based link ids) that must not
    // point inward simultaneously.
    int forbidden_a = 0;
    int forbidden_b = 0;
};

struct AndOrGraph {
    std::vector<AndOrNode> nodes;
    std::vector<AndOrLink> links;

    // Incident link ids per node, exactly 3 each once validated.
    std::vector<std::vector<int>> incidence() const;
    void validate() const;
};

// Orientation convention: bit 1 on link l means the link points toward its
// second endpoint (links[l].v), bit 0 toward links[l].u.
bool node_satisfied(const AndOrGraph& g, const std::vector<int>& incident_links, int node,
                    const Assignment& orientation);

// File format:
//   p andor <#nodes> <#links>
//   l <u> <v> <red|blue>          (link lines in id order, 1-based)
//   n <id> <and|or|por> [<l1> <l2>]   (por lists its forbidden inward pair)
//   s <bitstring over links>
//   t <bitstring over links>
struct AndOrInstance {
    AndOrGraph graph;
    Assignment start;
    Assignment end;
};

AndOrInstance parse_andor_instance(std::string_view text);
std::string serialize_andor_instance(const AndOrInstance& inst);

}  // namespace reconfig
