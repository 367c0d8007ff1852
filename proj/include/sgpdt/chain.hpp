#ifndef SGPDT_CHAIN_HPP
#define SGPDT_CHAIN_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "sgpdt/evolve.hpp"

namespace sgpdt {

// Every generation best of every external iteration, ordered by
// (ext_iter, int_iter).
struct ModelChain {
    std::vector<ScaledModel> models;

    std::size_t size() const noexcept { return models.size(); }
    // True when models[i] is the last recorded model of its external iteration.
    bool is_iteration_final(std::size_t i) const;
};

// Additive model: prediction is the sum of the members' scaled outputs.
struct FinalModel {
    std::vector<ScaledModel> members;
    std::size_t feature_count = 0;
    std::size_t chain_index = 0; // chain position the selection stopped at

    std::size_t total_size() const;
};

struct Selection {
    FinalModel model;
    std::size_t index = 0;
    std::vector<double> val_mse;      // validation MSE of the cumulative predictor at each chain index
    std::vector<double> smoothed_mse; // trailing rolling mean of val_mse
};

struct SgpdtResult {
    ModelChain chain;
    Selection selection;
    // targets[i] is the training target of external iteration i; the last
    // entry is the residual left after the final iteration.
    std::vector<SemanticVector> targets;
};

// Predictor implied by stopping the chain at `upto`: the final models of all
// earlier external iterations plus the model at `upto`, which stands in for
// its own iteration.
FinalModel final_model_at(const ModelChain& chain, std::size_t upto, std::size_t feature_count);

SemanticVector cumulative_prediction(const ModelChain& chain, std::size_t upto, const FeatureMatrix& features,
                                     EvalCounter& counter);

// Validation MSE of cumulative_prediction at every chain index. Each chain
// model is evaluated once.
std::vector<double> cumulative_mse(const ModelChain& chain, const FeatureMatrix& features,
                                   std::span<const double> targets, EvalCounter& counter, bool parallel = false);

// Trailing mean over the last `window` points; early points average what is available.
std::vector<double> rolling_mean(std::span<const double> values, std::size_t window);

// First index of the minimum of the rolling mean. NaN counts as +infinity.
std::size_t rolling_argmin(std::span<const double> values, std::size_t window);

Selection validate_and_select(const ModelChain& chain, const FeatureMatrix& val_features,
                              std::span<const double> val_targets, std::size_t window, EvalCounter& counter,
                              bool parallel = false);

SemanticVector predict(const FinalModel& model, const FeatureMatrix& features, EvalCounter& counter);

// The external loop: n_ext internal runs, each fitting the residual of the
// previous run's final best, followed by validation-guided selection.
SgpdtResult run_sgpdt(const FeatureMatrix& train_features, std::span<const double> train_targets,
                      const FeatureMatrix& val_features, std::span<const double> val_targets, const RunConfig& cfg,
                      Rng& rng, EvalCounter& train_counter, EvalCounter& val_counter);

} // namespace sgpdt

#endif
