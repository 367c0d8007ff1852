#ifndef SGPDT_TRIAL_HPP
#define SGPDT_TRIAL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgpdt/chain.hpp"
#include "sgpdt/data.hpp"

namespace sgpdt {

// Node operations split by the data they were spent on.
struct NodeOps {
    std::uint64_t train = 0;      // every fitness evaluation
    std::uint64_t validation = 0; // scoring the chain on the validation rows
    std::uint64_t test = 0;       // final model on the test rows

    std::uint64_t total() const noexcept { return train + validation + test; }
};

struct TrialReport {
    std::string dataset;
    Variant variant = Variant::SgpDt;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
    double test_rmse = 0.0;
    double val_rmse = 0.0;
    NodeOps node_ops;
    std::size_t final_model_size = 0;
    std::size_t selected_members = 0;
    std::size_t selected_index = 0;
    std::size_t chain_length = 0;
    double wall_time_s = 0.0;
};

// One row per chain entry, for external plotting.
struct TraceRow {
    std::size_t index = 0;
    std::size_t ext_iter = 0;
    std::size_t int_iter = 0;
    std::size_t tree_size = 0;
    double train_fitness = 0.0;
    double train_rmse = 0.0; // of the cumulative predictor on the training rows
    double val_mse = 0.0;
    double val_mse_smoothed = 0.0;
};

struct TrialOutcome {
    TrialReport report;
    FinalModel model;
    SgpdtResult run;
    Partition partition;
    std::vector<TraceRow> trace;
};

struct TrialOptions {
    // Attached to every phase counter; sees each evaluation event.
    EvalCounter::Observer observer;
};

double rmse(std::span<const double> predictions, std::span<const double> truth);

// Split, run the external loop, select on validation and score on test.
// Exceptions propagate; run_suite turns them into failed reports.
TrialOutcome run_trial(const Dataset& data, const RunConfig& cfg, const TrialOptions& options = {});

struct Summary {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

// Quartiles by linear interpolation between order statistics; the median of
// an even count is the mean of the two middle values.
Summary summarize(std::vector<double> values);
double median(std::vector<double> values);

struct DatasetAggregate {
    std::string dataset;
    std::size_t trials = 0;
    std::size_t failures = 0;
    Summary test_rmse;
    Summary node_ops;
};

struct SuiteResult {
    RunConfig config;
    std::vector<TrialReport> trials;
    std::vector<DatasetAggregate> aggregates;
};

// Trial i of every dataset runs with seed cfg.seed + i. Trials execute on up
// to `jobs` threads; the result does not depend on the job count.
SuiteResult run_suite(std::span<const Dataset> datasets, const RunConfig& cfg, std::size_t trials, std::size_t jobs);

nlohmann::json config_to_json(const RunConfig& cfg);
nlohmann::json report_to_json(const TrialReport& report);
nlohmann::json suite_to_json(const SuiteResult& suite);
std::string format_table(const SuiteResult& suite);
std::string format_trace_csv(std::span<const TraceRow> rows);

} // namespace sgpdt

#endif
