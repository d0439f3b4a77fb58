#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reconfig/approx_cut.hpp"  // AlgoMode
#include "reconfig/instances.hpp"
#include "reconfig/rational.hpp"

namespace reconfig {

struct SatAlgoConfig {
    std::uint64_t seed = 0;
    AlgoMode mode = AlgoMode::derand;
};

struct SatApproxResult {
    SatSequence sequence;
    Rat achieved;                       // exact sequence value
    Rat guarantee_bound;                // 1 - 1/(k-1) - 1/k
    Rat per_clause_floor;               // min over clauses of unconditional survival
    std::optional<Rat> estimator_root;  // derand: root estimator / m
    std::vector<std::string> notes;
};

// sum_{0<=j<=n} C(n,j)/(j+shift) for shift in {1, 2}, exact.
Rat binom_sum(int n, int shift);

// Probability that a width-k clause stays satisfied through the random route
// start -> rho -> end, where rho is a uniform assignment of the clause's
// variables and both legs flip their differing variables in uniform random
// order. The truth vectors give each literal's value under the endpoints and
// must each contain a true literal.
Rat clause_survival_prob(int k, const std::vector<std::uint8_t>& start_true,
                         const std::vector<std::uint8_t>& end_true);

// start -> rho -> end; random mode samples rho and the flip orders from the
// seed; derand mode fixes rho bit by bit and then each leg's flip order
// variable by variable, maximizing the exact expected number of clauses that
// stay satisfied throughout.
SatApproxResult approx_sat_reconfig(const SatReconfigInstance& inst, const SatAlgoConfig& cfg);

}  // namespace reconfig
