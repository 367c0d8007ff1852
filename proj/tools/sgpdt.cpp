#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgpdt/error.hpp"
#include "sgpdt/model_io.hpp"
#include "sgpdt/trial.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kDataError = 2, kInternalError = 3 };

sgpdt::TargetColumn target_column(const std::string& spec)
{
    if (!spec.empty() && spec.find_first_not_of("0123456789") == std::string::npos) {
        return static_cast<std::size_t>(std::stoull(spec));
    }
    return spec;
}

void write_text(const std::string& path, const std::string& text)
{
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw sgpdt::DataError("cannot write '" + path + "'");
    }
    out << text;
}

struct ConfigFlags {
    std::string variant = "sgpdt";
    sgpdt::RunConfig cfg;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags)
{
    cmd->add_option("--variant", flags.variant, "sgpdt, dt-em or dt-nm")->capture_default_str();
    cmd->add_option("--seed", flags.cfg.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--pop", flags.cfg.pop_size, "population size")->capture_default_str();
    cmd->add_option("--next", flags.cfg.n_ext, "external iterations")->capture_default_str();
    cmd->add_option("--nint", flags.cfg.n_int, "internal iterations (generations per run)")->capture_default_str();
    cmd->add_option("--tournament", flags.cfg.tournament_k, "tournament size")->capture_default_str();
    cmd->add_option("--window", flags.cfg.rolling_window, "rolling-mean window for selection")->capture_default_str();
    cmd->add_option("--test-frac", flags.cfg.split.test_fraction, "held-out test fraction")->capture_default_str();
    cmd->add_option("--val-frac", flags.cfg.split.val_fraction_of_train, "validation fraction of training rows")
        ->capture_default_str();
    cmd->add_option("--init-depth", flags.cfg.init_max_depth, "ramped initialization max depth")->capture_default_str();
    cmd->add_option("--mutation-depth", flags.cfg.mutation_max_depth, "max depth of mutation subtrees")
        ->capture_default_str();
    cmd->add_option("--leaf-bias", flags.cfg.leaf_bias, "probability a mutation site is a leaf")->capture_default_str();
}

sgpdt::RunConfig resolve(const ConfigFlags& flags)
{
    sgpdt::RunConfig cfg = flags.cfg;
    cfg.variant = sgpdt::parse_variant(flags.variant);
    cfg.validate();
    return cfg;
}

// Overrides template fields present in a suite document's "config" object.
void apply_json_config(const nlohmann::json& j, sgpdt::RunConfig& cfg)
{
    if (j.contains("variant")) cfg.variant = sgpdt::parse_variant(j["variant"].get<std::string>());
    if (j.contains("pop")) cfg.pop_size = j["pop"].get<std::size_t>();
    if (j.contains("next")) cfg.n_ext = j["next"].get<std::size_t>();
    if (j.contains("nint")) cfg.n_int = j["nint"].get<std::size_t>();
    if (j.contains("tournament")) cfg.tournament_k = j["tournament"].get<std::size_t>();
    if (j.contains("window")) cfg.rolling_window = j["window"].get<std::size_t>();
    if (j.contains("test_frac")) cfg.split.test_fraction = j["test_frac"].get<double>();
    if (j.contains("val_frac")) cfg.split.val_fraction_of_train = j["val_frac"].get<double>();
    if (j.contains("init_depth")) cfg.init_max_depth = j["init_depth"].get<std::size_t>();
    if (j.contains("mutation_depth")) cfg.mutation_max_depth = j["mutation_depth"].get<std::size_t>();
    if (j.contains("leaf_bias")) cfg.leaf_bias = j["leaf_bias"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
}

std::vector<sgpdt::Dataset> load_suite_datasets(const nlohmann::json& spec, const std::filesystem::path& base)
{
    std::vector<sgpdt::Dataset> out;
    for (const auto& d : spec.at("datasets")) {
        sgpdt::Dataset data;
        if (d.contains("generator")) {
            const auto gen = d["generator"].get<std::string>();
            if (gen != "uball5d") {
                throw sgpdt::ConfigError("unknown generator '" + gen + "'");
            }
            sgpdt::Rng rng(d.value("seed", std::uint64_t{0}));
            data = sgpdt::gen_uball5d(d.value("n", sgpdt::kUball5dDefaultSize), rng);
        } else {
            std::filesystem::path path = d.at("csv").get<std::string>();
            if (path.is_relative()) {
                path = base / path;
            }
            const auto& target = d.at("target");
            data = sgpdt::load_csv(path, target.is_number() ? sgpdt::TargetColumn{target.get<std::size_t>()}
                                                            : sgpdt::TargetColumn{target.get<std::string>()});
        }
        if (d.contains("name")) {
            data.name = d["name"].get<std::string>();
        }
        out.push_back(std::move(data));
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Symbolic regression by residual-chained short GP runs with linear scaling"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run one trial on a CSV dataset");
    std::string run_data;
    std::string run_target;
    std::string run_out = "-";
    std::string run_trace;
    std::string run_model;
    ConfigFlags run_flags;
    run->add_option("--data", run_data, "input CSV")->required();
    run->add_option("--target", run_target, "target column name or zero-based index")->required();
    run->add_option("--out", run_out, "report JSON path ('-' for stdout)")->capture_default_str();
    run->add_option("--trace", run_trace, "per-generation trace CSV");
    run->add_option("--model", run_model, "write the selected model JSON");
    add_config_flags(run, run_flags);

    // suite
    auto* suite = app.add_subcommand("suite", "run repeated trials over the datasets of a suite file");
    std::string suite_spec;
    std::optional<std::size_t> suite_trials;
    std::size_t suite_jobs = 1;
    std::string suite_out = "-";
    suite->add_option("--spec", suite_spec, "suite JSON")->required();
    suite->add_option("--trials", suite_trials, "trials per dataset (default 50)");
    suite->add_option("--jobs", suite_jobs, "parallel trials")->capture_default_str();
    suite->add_option("--out", suite_out, "results JSON path ('-' for stdout)")->capture_default_str();

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic benchmark");
    std::string gen_name;
    std::size_t gen_n = sgpdt::kUball5dDefaultSize;
    std::uint64_t gen_seed = 0;
    std::string gen_out = "-";
    gen->add_option("benchmark", gen_name, "benchmark name (uball5d)")->required();
    gen->add_option("--n", gen_n, "rows")->capture_default_str();
    gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", gen_out, "CSV path ('-' for stdout)")->capture_default_str();

    // predict
    auto* pred = app.add_subcommand("predict", "apply a saved model to a CSV");
    std::string pred_model;
    std::string pred_data;
    std::string pred_target;
    std::string pred_out = "-";
    pred->add_option("--model", pred_model, "model JSON")->required();
    pred->add_option("--data", pred_data, "input CSV (features, optionally with the target column)")->required();
    pred->add_option("--target", pred_target, "target column to drop before predicting");
    pred->add_option("--out", pred_out, "predictions CSV path ('-' for stdout)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*run) {
            const sgpdt::RunConfig cfg = resolve(run_flags);
            const sgpdt::Dataset data = sgpdt::load_csv(run_data, target_column(run_target));
            const auto outcome = sgpdt::run_trial(data, cfg);
            nlohmann::json report = {
                {"format", "sgpdt-report"},
                {"version", 1},
                {"config", sgpdt::config_to_json(cfg)},
                {"trial", sgpdt::report_to_json(outcome.report)},
                {"model", sgpdt::model_to_json(outcome.model)},
            };
            write_text(run_out, report.dump(2) + "\n");
            if (!run_trace.empty()) {
                write_text(run_trace, sgpdt::format_trace_csv(outcome.trace));
            }
            if (!run_model.empty()) {
                sgpdt::save_model(outcome.model, run_model);
            }
        } else if (*suite) {
            std::ifstream in(suite_spec);
            if (!in) {
                throw sgpdt::ConfigError("cannot open suite spec '" + suite_spec + "'");
            }
            nlohmann::json spec;
            try {
                in >> spec;
            } catch (const nlohmann::json::exception& e) {
                throw sgpdt::ConfigError(std::string("suite spec is not valid JSON: ") + e.what());
            }
            sgpdt::RunConfig cfg;
            std::vector<sgpdt::Dataset> datasets;
            try {
                apply_json_config(spec.value("config", nlohmann::json::object()), cfg);
                datasets = load_suite_datasets(spec, std::filesystem::path(suite_spec).parent_path());
            } catch (const nlohmann::json::exception& e) {
                throw sgpdt::ConfigError(std::string("malformed suite spec: ") + e.what());
            }
            const std::size_t trials = suite_trials.value_or(spec.value("trials", std::size_t{50}));
            const auto result = sgpdt::run_suite(datasets, cfg, trials, suite_jobs);
            write_text(suite_out, sgpdt::suite_to_json(result).dump(2) + "\n");
            std::cerr << sgpdt::format_table(result);
        } else if (*gen) {
            if (gen_name != "uball5d") {
                throw sgpdt::ConfigError("unknown benchmark '" + gen_name + "' (available: uball5d)");
            }
            sgpdt::Rng rng(gen_seed);
            write_text(gen_out, sgpdt::format_csv(sgpdt::gen_uball5d(gen_n, rng)));
        } else if (*pred) {
            const sgpdt::FinalModel model = sgpdt::load_model(pred_model);
            sgpdt::Dataset data;
            if (pred_target.empty()) {
                // Features only: parse with a dummy trailing target column.
                std::ifstream in(pred_data, std::ios::binary);
                if (!in) {
                    throw sgpdt::DataError("cannot open '" + pred_data + "'");
                }
                std::ostringstream raw;
                raw << in.rdbuf();
                std::string text;
                std::istringstream lines(raw.str());
                for (std::string line; std::getline(lines, line);) {
                    if (!line.empty() && line.back() == '\r') {
                        line.pop_back();
                    }
                    if (line.find_first_not_of(" \t") != std::string::npos) {
                        text += line + ",0\n";
                    }
                }
                data = sgpdt::parse_csv(text, sgpdt::TargetColumn{std::size_t{model.feature_count}});
            } else {
                data = sgpdt::load_csv(pred_data, target_column(pred_target));
            }
            sgpdt::EvalCounter counter;
            const auto predictions = sgpdt::predict(model, data.features, counter);
            std::string csv = "prediction\n";
            for (double v : predictions) {
                csv += nlohmann::json(v).dump() + "\n";
            }
            write_text(pred_out, csv);
        }
    } catch (const sgpdt::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const sgpdt::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
    return kOk;
}
