#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reconfig/instances.hpp"
#include "reconfig/rational.hpp"

namespace reconfig {

enum class AlgoMode { random, derand };

// Which endpoint of an edge is recolored first within one half of the route.
enum class FlipOrder { uniform, u_first, v_first };

struct CutAlgoConfig {
    std::uint64_t seed = 0;
    AlgoMode mode = AlgoMode::derand;
    Rat epsilon = 0;               // 0 resolves to 1/k^3
    Rat degree_exponent{2, 3};     // threshold Delta = floor(m^exponent)
};

struct CutApproxResult {
    CutSequence sequence;
    Rat achieved;                      // exact sequence value
    Rat guarantee_factor;              // (1 - 1/k - eps)^2
    Rat guarantee_bound;               // factor * min(val(start), val(end))
    std::optional<Rat> estimator_root; // derand: root estimator / total weight
    bool high_prob_regime = false;     // |E| >= 10^6
    std::vector<std::string> notes;
};

// Greedy strict-improvement recolorings from f until its value reaches
// 1 - 1/k. The returned sequence starts at f, has monotone increasing values
// (so min value = value(f)), and ends at the returned coloring.
std::pair<CutSequence, Coloring> uplift_low_value(const WeightedMultigraph& g, const Coloring& f);

// Probability that one edge stays bichromatic through one half of the route:
// the random irredundant transition from `start` colors to `target` colors,
// with the endpoint flip order given by `order`. With target = nullopt, the
// target pair is averaged uniformly over [k]^2; a proper start pair under a
// uniform target and uniform order gives exactly (1 - 1/k)^2.
Rat edge_survival_prob(int k, std::pair<int, int> start,
                       std::optional<std::pair<int, int>> target, FlipOrder order);

// The route start -> F -> end: both endpoints are first uplifted if their
// value is below 1/2, low-degree vertices are recolored to F before
// high-degree ones (and after them on the way back). mode=random draws F and
// the flip orders from the seed; mode=derand fixes F color by color and then
// each phase's flip order vertex by vertex, maximizing the exact expected
// weight of edges that stay bichromatic through the whole sequence.
CutApproxResult approx_cut_reconfig(const CutReconfigInstance& inst, const CutAlgoConfig& cfg);

// Largest d >= 1 with d^den <= m^num for exponent num/den; integer arithmetic.
std::uint64_t integer_power_floor(std::uint64_t m, const Rat& exponent);

}  // namespace reconfig
