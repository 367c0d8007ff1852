#ifndef SGPDT_SCALING_HPP
#define SGPDT_SCALING_HPP

#include <cstddef>
#include <span>

#include "sgpdt/expr.hpp"

namespace sgpdt {

struct ScalingCoeffs {
    double a = 0.0; // intercept
    double b = 1.0; // slope

    bool operator==(const ScalingCoeffs&) const = default;
};

// Below this sum of squared deviations the raw semantics count as constant:
// the slope is zeroed and the intercept becomes the target mean.
inline constexpr double kDegenerateSpread = 1e-12;

// Least-squares (a, b) for target ~ a + b * raw. Requires equal lengths >= 2.
ScalingCoeffs fit_scaling(std::span<const double> raw, std::span<const double> target);

SemanticVector apply_scaling(std::span<const double> raw, ScalingCoeffs coeffs);

// Population variance (divisor m) of scaled - target.
double fitness_variance(std::span<const double> scaled, std::span<const double> target);
// Mean of (scaled - target)^2.
double fitness_mse(std::span<const double> scaled, std::span<const double> target);

// Population variance of a vector (divisor m).
double variance(std::span<const double> values);
double mean(std::span<const double> values);

enum class FitnessKind { Variance, Mse };

// Fitness of a + b * raw against target without materializing the scaled vector.
double scaled_fitness(std::span<const double> raw, ScalingCoeffs coeffs, std::span<const double> target,
                      FitnessKind kind);

// An individual frozen with the scaling coefficients computed against the
// target that was active when it was recorded.
struct ScaledModel {
    ExprTree tree;
    ScalingCoeffs coeffs;
    std::size_t ext_iter = 0;
    std::size_t int_iter = 0;
    double train_fitness = 0.0;
    double train_mse = 0.0;
};

SemanticVector predict_model(const ScaledModel& model, const FeatureMatrix& cases, EvalCounter& counter);

} // namespace sgpdt

#endif
