#include "sgpdt/scaling.hpp"

#include "sgpdt/error.hpp"

namespace sgpdt {

namespace {

void check_lengths(std::span<const double> x, std::span<const double> y, const char* what)
{
    require(x.size() == y.size(), std::string(what) + ": length mismatch (" + std::to_string(x.size()) +
                                      " vs " + std::to_string(y.size()) + ")");
}

} // namespace

double mean(std::span<const double> values)
{
    require(!values.empty(), "mean: empty vector");
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

double variance(std::span<const double> values)
{
    const double mu = mean(values);
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mu) * (v - mu);
    }
    return ss / static_cast<double>(values.size());
}

ScalingCoeffs fit_scaling(std::span<const double> raw, std::span<const double> target)
{
    check_lengths(raw, target, "fit_scaling");
    require(raw.size() >= 2, "fit_scaling: need at least two cases");

    const double raw_mean = mean(raw);
    const double target_mean = mean(target);
    double cov = 0.0;
    double spread = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double dr = raw[i] - raw_mean;
        cov += dr * (target[i] - target_mean);
        spread += dr * dr;
    }
    if (spread < kDegenerateSpread) {
        return {target_mean, 0.0};
    }
    const double b = cov / spread;
    return {target_mean - b * raw_mean, b};
}

SemanticVector apply_scaling(std::span<const double> raw, ScalingCoeffs coeffs)
{
    SemanticVector out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out[i] = coeffs.a + coeffs.b * raw[i];
    }
    return out;
}

double fitness_variance(std::span<const double> scaled, std::span<const double> target)
{
    check_lengths(scaled, target, "fitness_variance");
    return scaled_fitness(scaled, {0.0, 1.0}, target, FitnessKind::Variance);
}

double fitness_mse(std::span<const double> scaled, std::span<const double> target)
{
    check_lengths(scaled, target, "fitness_mse");
    return scaled_fitness(scaled, {0.0, 1.0}, target, FitnessKind::Mse);
}

double scaled_fitness(std::span<const double> raw, ScalingCoeffs coeffs, std::span<const double> target,
                      FitnessKind kind)
{
    check_lengths(raw, target, "scaled_fitness");
    require(!raw.empty(), "scaled_fitness: empty vectors");
    const double m = static_cast<double>(raw.size());

    double residual_mean = 0.0;
    if (kind == FitnessKind::Variance) {
        for (std::size_t i = 0; i < raw.size(); ++i) {
            residual_mean += (coeffs.a + coeffs.b * raw[i]) - target[i];
        }
        residual_mean /= m;
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double r = (coeffs.a + coeffs.b * raw[i]) - target[i] - residual_mean;
        ss += r * r;
    }
    return ss / m;
}

SemanticVector predict_model(const ScaledModel& model, const FeatureMatrix& cases, EvalCounter& counter)
{
    SemanticVector out = evaluate(model.tree, cases, counter);
    for (double& v : out) {
        v = model.coeffs.a + model.coeffs.b * v;
    }
    return out;
}

} // namespace sgpdt
