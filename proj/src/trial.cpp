#include "sgpdt/trial.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>

#include "sgpdt/error.hpp"

namespace sgpdt {

double rmse(std::span<const double> predictions, std::span<const double> truth)
{
    require(predictions.size() == truth.size(), "rmse: length mismatch");
    require(!truth.empty(), "rmse: empty vectors");
    return std::sqrt(fitness_mse(predictions, truth));
}

TrialOutcome run_trial(const Dataset& data, const RunConfig& cfg, const TrialOptions& options)
{
    const auto started = std::chrono::steady_clock::now();
    cfg.validate();
    if (data.size() < kMinDatasetSize) {
        throw DataError("dataset '" + data.name + "' has " + std::to_string(data.size()) + " rows; at least " +
                        std::to_string(kMinDatasetSize) + " are needed");
    }

    Rng rng(cfg.seed);
    TrialOutcome outcome;
    outcome.partition = split(data.size(), cfg.split, rng);
    const Dataset train = data.subset(outcome.partition.train);
    const Dataset val = data.subset(outcome.partition.validation);
    const Dataset test = data.subset(outcome.partition.test);

    EvalCounter train_ops;
    EvalCounter val_ops;
    EvalCounter test_ops;
    if (options.observer) {
        train_ops.set_observer(options.observer);
        val_ops.set_observer(options.observer);
        test_ops.set_observer(options.observer);
    }

    outcome.run = run_sgpdt(train.features, train.targets, val.features, val.targets, cfg, rng, train_ops, val_ops);
    outcome.model = outcome.run.selection.model;
    const SemanticVector test_pred = predict(outcome.model, test.features, test_ops);

    TrialReport& r = outcome.report;
    r.dataset = data.name;
    r.variant = cfg.variant;
    r.seed = cfg.seed;
    r.test_rmse = rmse(test_pred, test.targets);
    r.val_rmse = std::sqrt(outcome.run.selection.val_mse[outcome.run.selection.index]);
    r.node_ops = {train_ops.total(), val_ops.total(), test_ops.total()};
    r.final_model_size = outcome.model.total_size();
    r.selected_members = outcome.model.members.size();
    r.selected_index = outcome.run.selection.index;
    r.chain_length = outcome.run.chain.size();

    const auto& chain = outcome.run.chain.models;
    outcome.trace.reserve(chain.size());
    for (std::size_t k = 0; k < chain.size(); ++k) {
        outcome.trace.push_back({k, chain[k].ext_iter, chain[k].int_iter, chain[k].tree.size(), chain[k].train_fitness,
                                 std::sqrt(chain[k].train_mse), outcome.run.selection.val_mse[k],
                                 outcome.run.selection.smoothed_mse[k]});
    }

    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return outcome;
}

double median(std::vector<double> values)
{
    return summarize(std::move(values)).median;
}

Summary summarize(std::vector<double> values)
{
    if (values.empty()) {
        const double nan = std::nan("");
        return {nan, nan, nan, nan, nan};
    }
    std::sort(values.begin(), values.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return frac == 0.0 ? values[lo] : values[lo] + frac * (values[hi] - values[lo]);
    };
    Summary s;
    const std::size_t n = values.size();
    s.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    s.q1 = quantile(0.25);
    s.q3 = quantile(0.75);
    s.min = values.front();
    s.max = values.back();
    return s;
}

SuiteResult run_suite(std::span<const Dataset> datasets, const RunConfig& cfg, std::size_t trials, std::size_t jobs)
{
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    cfg.validate();
    const std::size_t total = datasets.size() * trials;

    RunConfig trial_cfg = cfg;
    // Trial-level threads replace evaluation-level threads.
    if (jobs > 1) {
        trial_cfg.parallel_eval = false;
    }

    SuiteResult suite;
    suite.config = cfg;
    suite.trials.resize(total);

    const auto n = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(std::max<std::size_t>(jobs, 1)))
    for (std::ptrdiff_t job = 0; job < n; ++job) {
        const auto idx = static_cast<std::size_t>(job);
        const Dataset& data = datasets[idx / trials];
        RunConfig local = trial_cfg;
        local.seed = cfg.seed + idx % trials;
        TrialReport& report = suite.trials[idx];
        try {
            report = run_trial(data, local).report;
        } catch (const std::exception& e) {
            report = TrialReport{};
            report.dataset = data.name;
            report.variant = local.variant;
            report.seed = local.seed;
            report.ok = false;
            report.error = e.what();
        }
    }

    for (std::size_t d = 0; d < datasets.size(); ++d) {
        DatasetAggregate agg;
        agg.dataset = datasets[d].name;
        std::vector<double> errors;
        std::vector<double> ops;
        for (std::size_t t = 0; t < trials; ++t) {
            const TrialReport& r = suite.trials[d * trials + t];
            ++agg.trials;
            if (!r.ok) {
                ++agg.failures;
                continue;
            }
            errors.push_back(r.test_rmse);
            ops.push_back(static_cast<double>(r.node_ops.total()));
        }
        agg.test_rmse = summarize(errors);
        agg.node_ops = summarize(ops);
        suite.aggregates.push_back(agg);
    }
    return suite;
}

nlohmann::json config_to_json(const RunConfig& cfg)
{
    return {
        {"variant", variant_name(cfg.variant)},
        {"pop_size", cfg.pop_size},
        {"n_ext", cfg.n_ext},
        {"n_int", cfg.n_int},
        {"init_max_depth", cfg.init_max_depth},
        {"mutation_max_depth", cfg.mutation_max_depth},
        {"leaf_bias", cfg.leaf_bias},
        {"tournament_k", cfg.tournament_k},
        {"rolling_window", cfg.rolling_window},
        {"elite_size", cfg.elite_size},
        {"seed", cfg.seed},
        {"test_fraction", cfg.split.test_fraction},
        {"val_fraction", cfg.split.val_fraction_of_train},
    };
}

nlohmann::json report_to_json(const TrialReport& r)
{
    nlohmann::json j = {
        {"dataset", r.dataset},
        {"variant", variant_name(r.variant)},
        {"seed", r.seed},
        {"ok", r.ok},
    };
    if (!r.ok) {
        j["error"] = r.error;
        return j;
    }
    j["test_rmse"] = r.test_rmse;
    j["val_rmse"] = r.val_rmse;
    j["node_ops"] = r.node_ops.total();
    j["node_ops_by_phase"] = {
        {"train", r.node_ops.train}, {"validation", r.node_ops.validation}, {"test", r.node_ops.test}};
    j["final_model_size"] = r.final_model_size;
    j["selected_members"] = r.selected_members;
    j["selected_index"] = r.selected_index;
    j["chain_length"] = r.chain_length;
    j["wall_time_s"] = r.wall_time_s;
    return j;
}

namespace {

nlohmann::json summary_to_json(const Summary& s)
{
    return {{"median", s.median}, {"q1", s.q1}, {"q3", s.q3}, {"min", s.min}, {"max", s.max}};
}

} // namespace

nlohmann::json suite_to_json(const SuiteResult& suite)
{
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& r : suite.trials) {
        trials.push_back(report_to_json(r));
    }
    nlohmann::json aggregates = nlohmann::json::array();
    for (const auto& a : suite.aggregates) {
        aggregates.push_back({
            {"dataset", a.dataset},
            {"trials", a.trials},
            {"failures", a.failures},
            {"test_rmse", summary_to_json(a.test_rmse)},
            {"node_ops", summary_to_json(a.node_ops)},
        });
    }
    return {
        {"format", "sgpdt-suite"},
        {"version", 1},
        {"config", config_to_json(suite.config)},
        {"trials", std::move(trials)},
        {"aggregates", std::move(aggregates)},
    };
}

std::string format_table(const SuiteResult& suite)
{
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-16s %6s %6s %12s %12s %12s %16s\n", "dataset", "trials", "failed", "rmse_med",
                  "rmse_q1", "rmse_q3", "node_ops_med");
    out << line;
    for (const auto& a : suite.aggregates) {
        std::snprintf(line, sizeof(line), "%-16s %6zu %6zu %12.6g %12.6g %12.6g %16.6g\n", a.dataset.c_str(), a.trials,
                      a.failures, a.test_rmse.median, a.test_rmse.q1, a.test_rmse.q3, a.node_ops.median);
        out << line;
    }
    return out.str();
}

std::string format_trace_csv(std::span<const TraceRow> rows)
{
    std::ostringstream out;
    out << "index,ext_iter,int_iter,tree_size,train_fitness,train_rmse,val_mse,val_mse_smoothed\n";
    auto num = [](double v) { return nlohmann::json(v).dump(); };
    for (const auto& r : rows) {
        out << r.index << ',' << r.ext_iter << ',' << r.int_iter << ',' << r.tree_size << ',' << num(r.train_fitness)
            << ',' << num(r.train_rmse) << ',' << num(r.val_mse) << ',' << num(r.val_mse_smoothed) << '\n';
    }
    return out.str();
}

} // namespace sgpdt
