#include "sgpdt/chain.hpp"

#include <cmath>
#include <limits>

#include "sgpdt/error.hpp"

namespace sgpdt {

bool ModelChain::is_iteration_final(std::size_t i) const
{
    require(i < models.size(), "ModelChain: index out of range");
    return i + 1 == models.size() || models[i + 1].ext_iter != models[i].ext_iter;
}

std::size_t FinalModel::total_size() const
{
    std::size_t total = 0;
    for (const auto& m : members) {
        total += m.tree.size();
    }
    return total;
}

FinalModel final_model_at(const ModelChain& chain, std::size_t upto, std::size_t feature_count)
{
    require(upto < chain.size(), "final_model_at: index " + std::to_string(upto) + " out of range");
    FinalModel model;
    model.feature_count = feature_count;
    model.chain_index = upto;
    const std::size_t current_ext = chain.models[upto].ext_iter;
    for (std::size_t i = 0; i < upto; ++i) {
        if (chain.models[i].ext_iter != current_ext && chain.is_iteration_final(i)) {
            model.members.push_back(chain.models[i]);
        }
    }
    model.members.push_back(chain.models[upto]);
    return model;
}

SemanticVector cumulative_prediction(const ModelChain& chain, std::size_t upto, const FeatureMatrix& features,
                                     EvalCounter& counter)
{
    return predict(final_model_at(chain, upto, features.cols()), features, counter);
}

std::vector<double> cumulative_mse(const ModelChain& chain, const FeatureMatrix& features,
                                   std::span<const double> targets, EvalCounter& counter, bool parallel)
{
    require(features.rows() == targets.size(), "cumulative_mse: target length differs from case count");
    const auto predictions = predict_models(chain.models, features, counter, parallel);

    // Sum of the final predictions of completed external iterations, in order.
    SemanticVector base(features.rows(), 0.0);
    std::vector<double> mse(chain.size());
    SemanticVector cumulative(features.rows());
    for (std::size_t k = 0; k < chain.size(); ++k) {
        for (std::size_t i = 0; i < cumulative.size(); ++i) {
            cumulative[i] = base[i] + predictions[k][i];
        }
        mse[k] = fitness_mse(cumulative, targets);
        if (chain.is_iteration_final(k)) {
            base = cumulative;
        }
    }
    return mse;
}

std::vector<double> rolling_mean(std::span<const double> values, std::size_t window)
{
    require(window >= 1, "rolling_mean: window must be at least 1");
    std::vector<double> out(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        const std::size_t first = k + 1 >= window ? k + 1 - window : 0;
        double sum = 0.0;
        for (std::size_t j = first; j <= k; ++j) {
            sum += values[j];
        }
        out[k] = sum / static_cast<double>(k - first + 1);
    }
    return out;
}

std::size_t rolling_argmin(std::span<const double> values, std::size_t window)
{
    require(!values.empty(), "rolling_argmin: empty sequence");
    const auto smoothed = rolling_mean(values, window);
    auto key = [](double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; };
    std::size_t best = 0;
    for (std::size_t k = 1; k < smoothed.size(); ++k) {
        if (key(smoothed[k]) < key(smoothed[best])) {
            best = k;
        }
    }
    return best;
}

Selection validate_and_select(const ModelChain& chain, const FeatureMatrix& val_features,
                              std::span<const double> val_targets, std::size_t window, EvalCounter& counter,
                              bool parallel)
{
    require(chain.size() > 0, "validate_and_select: empty chain");
    require(window >= 1, "validate_and_select: window must be at least 1");
    if (val_targets.size() < 2) {
        throw ConfigError("validation set needs at least 2 cases, got " + std::to_string(val_targets.size()));
    }

    Selection selection;
    selection.val_mse = cumulative_mse(chain, val_features, val_targets, counter, parallel);
    selection.smoothed_mse = rolling_mean(selection.val_mse, window);
    selection.index = rolling_argmin(selection.val_mse, window);
    selection.model = final_model_at(chain, selection.index, val_features.cols());
    return selection;
}

SemanticVector predict(const FinalModel& model, const FeatureMatrix& features, EvalCounter& counter)
{
    require(!model.members.empty(), "predict: final model has no members");
    require(features.cols() == model.feature_count,
            "predict: data has " + std::to_string(features.cols()) + " features, model expects " +
                std::to_string(model.feature_count));
    SemanticVector total(features.rows(), 0.0);
    for (const ScaledModel& member : model.members) {
        const SemanticVector part = predict_model(member, features, counter);
        for (std::size_t i = 0; i < total.size(); ++i) {
            total[i] += part[i];
        }
    }
    return total;
}

SgpdtResult run_sgpdt(const FeatureMatrix& train_features, std::span<const double> train_targets,
                      const FeatureMatrix& val_features, std::span<const double> val_targets, const RunConfig& cfg,
                      Rng& rng, EvalCounter& train_counter, EvalCounter& val_counter)
{
    cfg.validate();
    require(train_features.rows() == train_targets.size(), "run_sgpdt: training target length mismatch");
    require(val_features.rows() == val_targets.size(), "run_sgpdt: validation target length mismatch");
    require(val_features.cols() == train_features.cols(), "run_sgpdt: validation schema differs from training");

    SgpdtResult result;
    result.chain.models.reserve(cfg.n_ext * cfg.n_int);
    result.targets.reserve(cfg.n_ext + 1);

    SemanticVector target(train_targets.begin(), train_targets.end());
    for (std::size_t ext = 0; ext < cfg.n_ext; ++ext) {
        result.targets.push_back(target);
        InternalLoopResult run = run_internal(target, train_features, cfg, rng, train_counter, ext);
        for (auto& model : run.best_per_generation) {
            result.chain.models.push_back(std::move(model));
        }
        for (std::size_t i = 0; i < target.size(); ++i) {
            target[i] -= run.final_prediction[i];
        }
    }
    result.targets.push_back(target);

    result.selection = validate_and_select(result.chain, val_features, val_targets, cfg.rolling_window,
                                           val_counter, cfg.parallel_eval);
    return result;
}

} // namespace sgpdt
