#ifndef SGPDT_EVOLVE_HPP
#define SGPDT_EVOLVE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sgpdt/config.hpp"
#include "sgpdt/kernels.hpp"

namespace sgpdt {

using Population = std::vector<Individual>;

struct InternalLoopResult {
    std::vector<ScaledModel> best_per_generation; // one per generation
    ScaledModel final_best;
    SemanticVector final_prediction; // scaled training semantics of final_best
    std::uint64_t node_ops = 0;
};

// Snapshot handed to an optional observer after each generation is scored.
struct GenerationView {
    std::size_t generation = 0;
    std::span<const Individual> population;
    std::size_t best = 0;
};

using GenerationHook = std::function<void(const GenerationView&)>;

// Strict ordering used by selection: lower fitness wins, then smaller tree.
bool fitter(const Individual& lhs, const Individual& rhs);

std::size_t best_index(std::span<const Individual> population);

// k draws with replacement; returns the index of the fittest drawn
// individual, earliest draw winning full ties.
std::size_t tournament_select(std::span<const Individual> population, std::size_t k, Rng& rng);

// One GP run of cfg.n_int generations against a fixed target: a fresh ramped
// population, linear-scaled fitness, elitism and mutation-only offspring.
InternalLoopResult run_internal(std::span<const double> target, const FeatureMatrix& train, const RunConfig& cfg,
                                Rng& rng, EvalCounter& counter, std::size_t ext_iter = 0,
                                const GenerationHook& hook = {});

} // namespace sgpdt

#endif
