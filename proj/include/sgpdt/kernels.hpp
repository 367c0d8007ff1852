#ifndef SGPDT_KERNELS_HPP
#define SGPDT_KERNELS_HPP

#include <limits>
#include <span>
#include <vector>

#include "sgpdt/expr.hpp"
#include "sgpdt/scaling.hpp"

namespace sgpdt {

struct Individual {
    ExprTree tree;
    SemanticVector raw; // unscaled semantics on the training cases
    ScalingCoeffs coeffs;
    double fitness = std::numeric_limits<double>::infinity();
};

// Data-parallel kernels. Each has a serial reference and an OpenMP version
// that must agree bit for bit, including the node-operation count.
namespace kernels {

// Evaluates, scales and scores every individual against the target.
// Non-finite fitness becomes +infinity.
void score_population_serial(std::span<Individual> population, const FeatureMatrix& cases,
                             std::span<const double> target, FitnessKind kind, EvalCounter& counter);
void score_population_parallel(std::span<Individual> population, const FeatureMatrix& cases,
                               std::span<const double> target, FitnessKind kind, EvalCounter& counter);

// Scaled prediction of each model on the cases (one vector per model).
std::vector<SemanticVector> predict_models_serial(std::span<const ScaledModel> models, const FeatureMatrix& cases,
                                                  EvalCounter& counter);
std::vector<SemanticVector> predict_models_parallel(std::span<const ScaledModel> models,
                                                    const FeatureMatrix& cases, EvalCounter& counter);

int max_threads();

} // namespace kernels

void score_population(std::span<Individual> population, const FeatureMatrix& cases, std::span<const double> target,
                      FitnessKind kind, EvalCounter& counter, bool parallel);

std::vector<SemanticVector> predict_models(std::span<const ScaledModel> models, const FeatureMatrix& cases,
                                           EvalCounter& counter, bool parallel);

} // namespace sgpdt

#endif
