#include <doctest.h>

#include <cmath>

#include "sgpdt/error.hpp"
#include "sgpdt/model_io.hpp"
#include "sgpdt/trial.hpp"
#include "support.hpp"

using namespace sgpdt;

namespace {

RunConfig tiny(std::size_t pop, std::size_t n_ext, std::size_t n_int)
{
    RunConfig cfg;
    cfg.pop_size = pop;
    cfg.n_ext = n_ext;
    cfg.n_int = n_int;
    cfg.rolling_window = 3;
    cfg.parallel_eval = false;
    return cfg;
}

Dataset sample(std::size_t n, std::uint64_t seed)
{
    Rng rng(seed);
    auto d = gen_uball5d(n, rng);
    d.name = "sample";
    return d;
}

} // namespace

TEST_CASE("rmse")
{
    CHECK(rmse(std::vector<double>{0, 0}, std::vector<double>{3, 4}) == doctest::Approx(std::sqrt(12.5)));
    CHECK(rmse(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}) == 0.0);
    const std::vector<double> p{0.3, -1.2, 4.0, 2.2};
    const std::vector<double> t{1.0, 0.5, 3.0, 2.0};
    const double r = rmse(p, t);
    CHECK(r * r == doctest::Approx(fitness_mse(p, t)).epsilon(1e-12));
    CHECK_THROWS_AS(rmse(std::vector<double>{1}, std::vector<double>{1, 2}), ContractViolation);
}

TEST_CASE("summary statistics")
{
    CHECK(median({3, 1, 2}) == 2);
    CHECK(median({4, 1, 3, 2}) == 2.5);
    const auto s = summarize({5, 1, 4, 2, 3});
    CHECK(s.median == 3);
    CHECK(s.q1 == 2);
    CHECK(s.q3 == 4);
    CHECK(s.min == 1);
    CHECK(s.max == 5);
    const auto one = summarize({7});
    CHECK(one.median == 7);
    CHECK(one.q1 == 7);
    CHECK(one.q3 == 7);
}

TEST_CASE("run_trial: node operations equal the shadow count")
{
    const auto data = sample(20, 1);
    auto cfg = tiny(2, 1, 1);
    std::uint64_t shadow = 0;
    TrialOptions options;
    options.observer = [&](const ExprTree& t, std::size_t m) { shadow += test::count_tokens(t.to_string()) * m; };
    const auto outcome = run_trial(data, cfg, options);
    CHECK(outcome.report.ok);
    CHECK(outcome.report.node_ops.total() == shadow);
    CHECK(outcome.report.node_ops.train > 0);
    CHECK(outcome.report.node_ops.validation > 0);
    CHECK(outcome.report.node_ops.test > 0);
    CHECK(outcome.partition.train.size() + outcome.partition.validation.size() + outcome.partition.test.size() == 20);
}

TEST_CASE("run_trial: reported test RMSE matches a fresh prediction")
{
    const auto data = sample(200, 2);
    const auto outcome = run_trial(data, tiny(40, 3, 5));
    const auto test = data.subset(outcome.partition.test);
    EvalCounter counter;
    const auto pred = predict(outcome.model, test.features, counter);
    CHECK(outcome.report.test_rmse == rmse(pred, test.targets));
    CHECK(outcome.report.chain_length == 15);
    CHECK(outcome.trace.size() == 15);
    CHECK(outcome.report.selected_index == outcome.model.chain_index);
    CHECK(outcome.report.selected_members == outcome.model.members.size());
    CHECK(outcome.report.final_model_size == outcome.model.total_size());
}

TEST_CASE("run_trial: DT-NM never uses min or max")
{
    const auto data = sample(150, 3);
    auto cfg = tiny(60, 3, 6);
    cfg.variant = Variant::DtNm;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        cfg.seed = seed;
        const auto outcome = run_trial(data, cfg);
        for (const auto& m : outcome.run.chain.models) {
            const auto text = m.tree.to_string();
            CHECK(text.find("min") == std::string::npos);
            CHECK(text.find("max") == std::string::npos);
        }
        const auto doc = model_to_json(outcome.model).dump();
        CHECK(doc.find("(min") == std::string::npos);
        CHECK(doc.find("(max") == std::string::npos);
    }
}

TEST_CASE("run_trial: deterministic apart from wall time")
{
    const auto data = sample(120, 4);
    auto cfg = tiny(30, 3, 4);
    cfg.seed = 17;
    auto a = run_trial(data, cfg);
    auto b = run_trial(data, cfg);
    a.report.wall_time_s = 0;
    b.report.wall_time_s = 0;
    CHECK(report_to_json(a.report) == report_to_json(b.report));
    CHECK(model_to_json(a.model) == model_to_json(b.model));
    CHECK(format_trace_csv(a.trace) == format_trace_csv(b.trace));
}

TEST_CASE("run_trial: too few rows")
{
    const auto data = sample(9, 5);
    CHECK_THROWS_AS(run_trial(data, tiny(4, 1, 1)), DataError);
}

TEST_CASE("run_suite: seeds, aggregation and job independence")
{
    std::vector<Dataset> sets{sample(80, 6)};
    auto cfg = tiny(20, 2, 3);
    cfg.seed = 100;

    const auto single = run_suite(sets, cfg, 1, 1);
    REQUIRE(single.trials.size() == 1);
    CHECK(single.aggregates.front().test_rmse.median == single.trials.front().test_rmse);

    const auto serial = run_suite(sets, cfg, 5, 1);
    const auto parallel = run_suite(sets, cfg, 5, 4);
    REQUIRE(serial.trials.size() == 5);
    REQUIRE(serial.aggregates.size() == 1);
    CHECK(serial.aggregates.front().trials == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(serial.trials[i].seed == 100 + i);
        CHECK(serial.trials[i].test_rmse == parallel.trials[i].test_rmse);
        CHECK(serial.trials[i].node_ops.total() == parallel.trials[i].node_ops.total());
    }

    auto standalone_cfg = cfg;
    standalone_cfg.seed = 103;
    const auto standalone = run_trial(sets.front(), standalone_cfg);
    CHECK(standalone.report.test_rmse == serial.trials[3].test_rmse);

    std::vector<double> rmses;
    for (const auto& t : serial.trials) {
        rmses.push_back(t.test_rmse);
    }
    CHECK(serial.aggregates.front().test_rmse.median == median(rmses));

    const auto doc = suite_to_json(serial);
    CHECK(doc["format"] == "sgpdt-suite");
    CHECK(doc["trials"].size() == 5);
    CHECK_FALSE(format_table(serial).empty());
}

TEST_CASE("run_suite: failures are recorded, not thrown")
{
    std::vector<Dataset> sets{sample(9, 7), sample(60, 8)};
    const auto suite = run_suite(sets, tiny(10, 1, 2), 2, 2);
    REQUIRE(suite.trials.size() == 4);
    std::size_t failures = 0;
    for (const auto& t : suite.trials) {
        failures += t.ok ? 0 : 1;
    }
    CHECK(failures == 2);
    CHECK(suite.aggregates.size() == 2);
}
