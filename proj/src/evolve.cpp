#include "sgpdt/evolve.hpp"

#include <algorithm>
#include <numeric>

#include "sgpdt/error.hpp"

namespace sgpdt {

bool fitter(const Individual& lhs, const Individual& rhs)
{
    if (lhs.fitness != rhs.fitness) {
        return lhs.fitness < rhs.fitness;
    }
    return lhs.tree.size() < rhs.tree.size();
}

std::size_t best_index(std::span<const Individual> population)
{
    require(!population.empty(), "best_index: empty population");
    std::size_t best = 0;
    for (std::size_t i = 1; i < population.size(); ++i) {
        if (fitter(population[i], population[best])) {
            best = i;
        }
    }
    return best;
}

std::size_t tournament_select(std::span<const Individual> population, std::size_t k, Rng& rng)
{
    require(!population.empty(), "tournament_select: empty population");
    require(k >= 1, "tournament_select: tournament size must be at least 1");
    std::size_t winner = uniform_index(rng, population.size());
    for (std::size_t draw = 1; draw < k; ++draw) {
        const std::size_t challenger = uniform_index(rng, population.size());
        if (fitter(population[challenger], population[winner])) {
            winner = challenger;
        }
    }
    return winner;
}

namespace {

std::vector<std::size_t> elite_indices(std::span<const Individual> population, std::size_t count)
{
    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return fitter(population[l], population[r]); });
    order.resize(std::min(count, order.size()));
    return order;
}

} // namespace

InternalLoopResult run_internal(std::span<const double> target, const FeatureMatrix& train, const RunConfig& cfg,
                                Rng& rng, EvalCounter& counter, std::size_t ext_iter, const GenerationHook& hook)
{
    cfg.validate();
    require(target.size() == train.rows(), "run_internal: target length differs from training case count");

    const PrimitiveSet primitives = PrimitiveSet::standard(train.cols(), cfg.uses_min_max());
    const MutationParams mutation{cfg.leaf_bias, cfg.mutation_max_depth};
    const FitnessKind kind = cfg.fitness_kind();
    const std::uint64_t ops_before = counter.total();

    Population population;
    population.reserve(cfg.pop_size);
    for (ExprTree& tree : ramped_half_and_half(cfg.pop_size, cfg.init_max_depth, rng, primitives)) {
        population.push_back({std::move(tree), {}, {}, 0.0});
    }

    InternalLoopResult result;
    result.best_per_generation.reserve(cfg.n_int);

    for (std::size_t gen = 0; gen < cfg.n_int; ++gen) {
        score_population(population, train, target, kind, counter, cfg.parallel_eval);

        const std::size_t best = best_index(population);
        const Individual& champion = population[best];
        const SemanticVector scaled = apply_scaling(champion.raw, champion.coeffs);
        result.best_per_generation.push_back(
            {champion.tree, champion.coeffs, ext_iter, gen, champion.fitness, fitness_mse(scaled, target)});
        if (hook) {
            hook({gen, population, best});
        }
        if (gen + 1 == cfg.n_int) {
            result.final_prediction = scaled;
            break;
        }

        Population next;
        next.reserve(cfg.pop_size);
        for (std::size_t idx : elite_indices(population, cfg.elite_size)) {
            next.push_back(population[idx]);
        }
        while (next.size() < cfg.pop_size) {
            const Individual& parent = population[tournament_select(population, cfg.tournament_k, rng)];
            next.push_back({mutate(parent.tree, rng, primitives, mutation), {}, {}, 0.0});
        }
        population = std::move(next);
    }

    result.final_best = result.best_per_generation.back();
    result.node_ops = counter.total() - ops_before;
    return result;
}

} // namespace sgpdt
