// Serial vs OpenMP timings for the population-scoring and chain-prediction
// kernels. Also checks that both produce identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include <CLI11.hpp>

#include "sgpdt/data.hpp"
#include "sgpdt/kernels.hpp"

namespace {

double seconds(const std::function<void()>& fn, int repeats)
{
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) {
        fn();
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / repeats;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"kernel benchmark"};
    std::size_t rows = 4000;
    std::size_t pop = 1000;
    std::size_t mutations = 20;
    int repeats = 3;
    app.add_option("--rows", rows, "fitness cases")->capture_default_str();
    app.add_option("--pop", pop, "trees per population")->capture_default_str();
    app.add_option("--mutations", mutations, "mutation rounds applied to grow the trees")->capture_default_str();
    app.add_option("--repeats", repeats, "timed repetitions per kernel")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    sgpdt::Rng rng(42);
    const auto data = sgpdt::gen_uball5d(rows, rng);
    const auto primitives = sgpdt::PrimitiveSet::standard(data.feature_count());

    std::vector<sgpdt::Individual> serial_pop;
    for (auto& tree : sgpdt::ramped_half_and_half(pop, 4, rng, primitives)) {
        for (std::size_t k = 0; k < mutations; ++k) {
            tree = sgpdt::mutate(tree, rng, primitives);
        }
        serial_pop.push_back({std::move(tree), {}, {}, 0.0});
    }
    auto parallel_pop = serial_pop;

    std::vector<sgpdt::ScaledModel> models;
    for (const auto& ind : serial_pop) {
        models.push_back({ind.tree, {0.1, 0.5}, 0, 0, 0.0, 0.0});
    }

    sgpdt::EvalCounter serial_ops;
    sgpdt::EvalCounter parallel_ops;
    const auto kind = sgpdt::FitnessKind::Variance;

    const double t_score_serial = seconds(
        [&] { sgpdt::kernels::score_population_serial(serial_pop, data.features, data.targets, kind, serial_ops); },
        repeats);
    const double t_score_parallel = seconds(
        [&] {
            sgpdt::kernels::score_population_parallel(parallel_pop, data.features, data.targets, kind, parallel_ops);
        },
        repeats);

    std::vector<sgpdt::SemanticVector> serial_pred;
    std::vector<sgpdt::SemanticVector> parallel_pred;
    const double t_pred_serial = seconds(
        [&] { serial_pred = sgpdt::kernels::predict_models_serial(models, data.features, serial_ops); }, repeats);
    const double t_pred_parallel = seconds(
        [&] { parallel_pred = sgpdt::kernels::predict_models_parallel(models, data.features, parallel_ops); },
        repeats);

    bool identical = serial_ops.total() == parallel_ops.total() && serial_pred == parallel_pred;
    for (std::size_t i = 0; i < serial_pop.size(); ++i) {
        identical = identical && serial_pop[i].fitness == parallel_pop[i].fitness &&
                    serial_pop[i].coeffs == parallel_pop[i].coeffs;
    }

    const double ops_per_call = static_cast<double>(serial_ops.total()) / (2.0 * repeats);
    std::printf("threads: %d, rows: %zu, population: %zu, node ops per call: %.3g\n",
                sgpdt::kernels::max_threads(), rows, pop, ops_per_call);
    std::printf("%-18s %12s %12s %9s %14s\n", "kernel", "serial_s", "openmp_s", "speedup", "serial_ns/op");
    std::printf("%-18s %12.4f %12.4f %9.2f %14.3f\n", "score_population", t_score_serial, t_score_parallel,
                t_score_serial / t_score_parallel, 1e9 * t_score_serial / ops_per_call);
    std::printf("%-18s %12.4f %12.4f %9.2f %14.3f\n", "predict_models", t_pred_serial, t_pred_parallel,
                t_pred_serial / t_pred_parallel, 1e9 * t_pred_serial / ops_per_call);
    std::printf("results identical: %s\n", identical ? "yes" : "NO");
    return identical ? EXIT_SUCCESS : EXIT_FAILURE;
}
