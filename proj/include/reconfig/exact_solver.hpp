#pragma once

#include <cstdint>

#include "reconfig/instances.hpp"
#include "reconfig/rational.hpp"

namespace reconfig {

// Exact maxmin value between the endpoints, its witness sequence, and the
// number of configurations visited. The witness is shortest (BFS) among the
// sequences achieving opt.
struct CutExactResult {
    Rat opt;
    CutSequence witness;
    std::uint64_t explored = 0;
};

struct SatExactResult {
    Rat opt;
    SatSequence witness;
    std::uint64_t explored = 0;
};

// Bottleneck connectivity over the full configuration space: configurations
// sorted by value descending, activated one by one into a union-find over
// single-site adjacency; opt is the activation value at which the endpoints
// first connect. Refuses (BudgetError) when k^n (resp. 2^n) exceeds budget.
CutExactResult opt_cut_exact(const CutReconfigInstance& inst, std::uint64_t budget,
                             int threads = 1);
SatExactResult opt_sat_exact(const SatReconfigInstance& inst, std::uint64_t budget,
                             int threads = 1);

}  // namespace reconfig
