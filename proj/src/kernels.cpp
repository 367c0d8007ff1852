#include "sgpdt/kernels.hpp"

#include <cmath>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sgpdt/error.hpp"

namespace sgpdt {

namespace {

void score_one(Individual& ind, const FeatureMatrix& cases, std::span<const double> target, FitnessKind kind,
               EvalScratch& scratch, EvalCounter& counter)
{
    ind.raw.resize(cases.rows());
    evaluate_into(ind.tree, cases, ind.raw, scratch, counter);
    ind.coeffs = fit_scaling(ind.raw, target);
    const double f = scaled_fitness(ind.raw, ind.coeffs, target, kind);
    const bool finite = std::isfinite(f) && std::isfinite(ind.coeffs.a) && std::isfinite(ind.coeffs.b);
    ind.fitness = finite ? f : std::numeric_limits<double>::infinity();
}

void predict_one(const ScaledModel& model, const FeatureMatrix& cases, SemanticVector& out, EvalScratch& scratch,
                 EvalCounter& counter)
{
    out.resize(cases.rows());
    evaluate_into(model.tree, cases, out, scratch, counter);
    for (double& v : out) {
        v = model.coeffs.a + model.coeffs.b * v;
    }
}

void check_target(const FeatureMatrix& cases, std::span<const double> target)
{
    require(cases.rows() == target.size(), "score_population: target length differs from case count");
}

} // namespace

namespace kernels {

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void score_population_serial(std::span<Individual> population, const FeatureMatrix& cases,
                             std::span<const double> target, FitnessKind kind, EvalCounter& counter)
{
    check_target(cases, target);
    EvalScratch scratch;
    for (Individual& ind : population) {
        score_one(ind, cases, target, kind, scratch, counter);
    }
}

void score_population_parallel(std::span<Individual> population, const FeatureMatrix& cases,
                               std::span<const double> target, FitnessKind kind, EvalCounter& counter)
{
    check_target(cases, target);
    const auto n = static_cast<std::ptrdiff_t>(population.size());
    std::exception_ptr failure;
#pragma omp parallel
    {
        EvalScratch scratch;
#pragma omp for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                score_one(population[static_cast<std::size_t>(i)], cases, target, kind, scratch, counter);
            } catch (...) {
#pragma omp critical(sgpdt_kernel_failure)
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::vector<SemanticVector> predict_models_serial(std::span<const ScaledModel> models, const FeatureMatrix& cases,
                                                  EvalCounter& counter)
{
    std::vector<SemanticVector> out(models.size());
    EvalScratch scratch;
    for (std::size_t i = 0; i < models.size(); ++i) {
        predict_one(models[i], cases, out[i], scratch, counter);
    }
    return out;
}

std::vector<SemanticVector> predict_models_parallel(std::span<const ScaledModel> models,
                                                    const FeatureMatrix& cases, EvalCounter& counter)
{
    std::vector<SemanticVector> out(models.size());
    const auto n = static_cast<std::ptrdiff_t>(models.size());
    std::exception_ptr failure;
#pragma omp parallel
    {
        EvalScratch scratch;
#pragma omp for schedule(dynamic, 4)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            try {
                predict_one(models[k], cases, out[k], scratch, counter);
            } catch (...) {
#pragma omp critical(sgpdt_kernel_failure)
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

} // namespace kernels

void score_population(std::span<Individual> population, const FeatureMatrix& cases, std::span<const double> target,
                      FitnessKind kind, EvalCounter& counter, bool parallel)
{
    if (parallel) {
        kernels::score_population_parallel(population, cases, target, kind, counter);
    } else {
        kernels::score_population_serial(population, cases, target, kind, counter);
    }
}

std::vector<SemanticVector> predict_models(std::span<const ScaledModel> models, const FeatureMatrix& cases,
                                           EvalCounter& counter, bool parallel)
{
    return parallel ? kernels::predict_models_parallel(models, cases, counter)
                    : kernels::predict_models_serial(models, cases, counter);
}

} // namespace sgpdt
