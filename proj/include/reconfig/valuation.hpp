#pragma once

#include <vector>

#include "reconfig/instances.hpp"
#include "reconfig/rational.hpp"
#include "reconfig/verifiers.hpp"

namespace reconfig {

// Fraction of edge weight made bichromatic. Errors on an empty edge list.
Rat cut_value(const WeightedMultigraph& g, const Coloring& f);

// Fraction of clauses satisfied.
Rat sat_value(const CnfFormula& formula, const Assignment& a);

// Minimum configuration value over the sequence; validates first.
Rat sequence_value(const CutReconfigInstance& inst, const CutSequence& seq);
Rat sequence_value(const SatReconfigInstance& inst, const SatSequence& seq);

// ---------------------------------------------------------------------------
// Grid colorings f : [k]^2 -> [k]

struct GridColoring {
    int k = 0;
    std::vector<int> cells;  // cells[(y-1)*k + (x-1)], values in 1..k

    int at(int x, int y) const { return cells[static_cast<size_t>(y - 1) * k + (x - 1)]; }
    int& at(int x, int y) { return cells[static_cast<size_t>(y - 1) * k + (x - 1)]; }
    // 1-based flat position of (x, y); matches the tester position layout.
    int position(int x, int y) const { return (y - 1) * k + x; }

    // Color at every (x, y) is sigma(y) (rows constant) / sigma(x) (columns).
    static GridColoring horizontally_striped(int k, const std::vector<int>& sigma);
    static GridColoring vertically_striped(int k, const std::vector<int>& sigma);
    GridColoring transposed() const;
    Coloring flatten() const;
    void validate() const;
};

struct StripeReport {
    Rat dist_h;              // relative Hamming distance to the horizontally striped set
    Rat dist_v;
    Rat eps;                 // min(dist_h, dist_v)
    int dec = 1;             // 1 if dist_h <= dist_v (ties horizontal), else 2
    std::vector<int> sigma;  // permutation realizing eps for the dec orientation
};

// Exact stripe distances via a k x k assignment solve on row/column color counts.
StripeReport stripe_report(const GridColoring& g);

// Pr[f(X1,Y1) = f(X2,Y2) | X1 != X2, Y1 != Y2], exact.
Rat stripe_reject_prob(const GridColoring& g);

// Acceptance probability of a pair tester on a configuration: mass of support
// pairs whose two positions carry different colors.
Rat tester_accept_prob(const PairTester& t, const Coloring& cfg);

// Fraction of checks whose accepted-view set contains the restricted proof.
Rat explicit_verifier_accept_prob(const ExplicitVerifier& v, const Assignment& proof);

// Minimum-cost perfect assignment of an n x n integer cost matrix
// (cost[i][j] = cost of assigning row i to column j). Returns the column
// chosen for each row. O(n^3).
std::vector<int> solve_assignment(const std::vector<std::vector<long long>>& cost);

// Grid file format: one or two blocks of "grid <k>" followed by k rows of k
// colors; '#' comments allowed.
std::vector<GridColoring> parse_grids(std::string_view text);
std::string serialize_grids(const std::vector<GridColoring>& grids);

}  // namespace reconfig
