#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "sgpdt/error.hpp"
#include "sgpdt/scaling.hpp"
#include "support.hpp"

using namespace sgpdt;

TEST_CASE("fit_scaling: exact line")
{
    const std::vector<double> raw{1, 2, 3};
    const std::vector<double> target{2, 4, 6};
    const auto oracle = test::normal_equations(raw, target);
    CHECK(oracle.a == doctest::Approx(0.0));
    CHECK(oracle.b == doctest::Approx(2.0));
    const auto c = fit_scaling(raw, target);
    CHECK(c.a == doctest::Approx(oracle.a).epsilon(1e-12));
    CHECK(c.b == doctest::Approx(oracle.b).epsilon(1e-12));
}

TEST_CASE("fit_scaling: constant semantics fall back to the target mean")
{
    const auto c = fit_scaling(std::vector<double>{5, 5, 5}, std::vector<double>{1, 2, 3});
    CHECK(c.b == 0.0);
    CHECK(c.a == 2.0);
}

TEST_CASE("fit_scaling: zero covariance")
{
    const std::vector<double> raw{1, 2};
    const std::vector<double> target{3, 3};
    const auto oracle = test::normal_equations(raw, target);
    const auto c = fit_scaling(raw, target);
    CHECK(oracle.b == doctest::Approx(0.0));
    CHECK(oracle.a == doctest::Approx(3.0));
    CHECK(c.b == 0.0);
    CHECK(c.a == 3.0);
}

TEST_CASE("fit_scaling: contract")
{
    CHECK_THROWS_AS(fit_scaling(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), ContractViolation);
    CHECK_THROWS_AS(fit_scaling(std::vector<double>{1}, std::vector<double>{1}), ContractViolation);
}

TEST_CASE("apply_scaling")
{
    CHECK(apply_scaling(std::vector<double>{1, 2, 3}, {0, 2}) == std::vector<double>{2, 4, 6});
    CHECK(apply_scaling(std::vector<double>{7, 9}, {0, 1}) == std::vector<double>{7, 9});
    CHECK(apply_scaling(std::vector<double>{1, 1}, {-1, 0}) == std::vector<double>{-1, -1});
}

TEST_CASE("fitness_variance")
{
    const std::vector<double> t{0.5, -2, 7, 3};
    CHECK(fitness_variance(t, t) == 0.0);
    std::vector<double> shifted = t;
    for (double& v : shifted) v += 4.25;
    CHECK(fitness_variance(shifted, t) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fitness_variance(std::vector<double>{0, 0}, std::vector<double>{0, 2}) == 1.0);
    CHECK_THROWS_AS(fitness_variance(std::vector<double>{0}, std::vector<double>{0, 2}), ContractViolation);
}

TEST_CASE("fitness_mse")
{
    const std::vector<double> t{0.5, -2, 7, 3};
    CHECK(fitness_mse(t, t) == 0.0);
    std::vector<double> shifted = t;
    for (double& v : shifted) v += 3.0;
    CHECK(fitness_mse(shifted, t) == doctest::Approx(9.0));
    CHECK(fitness_mse(std::vector<double>{0, 0}, std::vector<double>{0, 2}) == 2.0);
    CHECK_THROWS_AS(fitness_mse(std::vector<double>{0}, std::vector<double>{0, 2}), ContractViolation);
}

TEST_CASE("scaled_fitness matches materialized scaling")
{
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const std::size_t m = 2 + uniform_index(rng, 50);
        std::vector<double> raw(m), t(m);
        for (std::size_t k = 0; k < m; ++k) {
            raw[k] = uniform_real(rng, -10, 10);
            t[k] = uniform_real(rng, -3, 3);
        }
        const auto c = fit_scaling(raw, t);
        const auto scaled = apply_scaling(raw, c);
        CHECK(scaled_fitness(raw, c, t, FitnessKind::Mse) == doctest::Approx(fitness_mse(scaled, t)).epsilon(1e-12));
        CHECK(scaled_fitness(raw, c, t, FitnessKind::Variance) ==
              doctest::Approx(fitness_variance(scaled, t)).epsilon(1e-12));
    }
}

namespace {

struct Pair {
    std::vector<double> raw;
    std::vector<double> target;
};

Pair random_pair(Rng& rng)
{
    const std::size_t m = 2 + uniform_index(rng, 199);
    Pair p{std::vector<double>(m), std::vector<double>(m)};
    const double scale = std::pow(10.0, uniform_real(rng, -2, 3));
    const bool constant_raw = bernoulli(rng, 0.1);
    const double c = uniform_real(rng, -5, 5);
    for (std::size_t i = 0; i < m; ++i) {
        p.raw[i] = constant_raw ? c : uniform_real(rng, -scale, scale);
        p.target[i] = uniform_real(rng, -1, 1) * scale + 0.3 * p.raw[i];
    }
    return p;
}

} // namespace

TEST_CASE("property: fitted coefficients beat random affine alternatives")
{
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const Pair p = random_pair(rng);
        const double best = fitness_mse(apply_scaling(p.raw, fit_scaling(p.raw, p.target)), p.target);
        double scale2 = 0;
        for (double t : p.target) scale2 = std::max(scale2, t * t);
        for (int k = 0; k < 200; ++k) {
            const ScalingCoeffs alt{uniform_real(rng, -5, 5), uniform_real(rng, -5, 5)};
            CHECK(best <= fitness_mse(apply_scaling(p.raw, alt), p.target) + 1e-9 * scale2);
        }
    }
}

TEST_CASE("property: scaled MSE is bounded by the target variance")
{
    Rng rng(77);
    for (int trial = 0; trial < 500; ++trial) {
        const Pair p = random_pair(rng);
        const auto c = fit_scaling(p.raw, p.target);
        const auto scaled = apply_scaling(p.raw, c);
        const double mse = fitness_mse(scaled, p.target);
        const double var = test::population_variance(p.target);
        CHECK(mse <= var + 1e-9 * std::max(1.0, var));
        if (std::all_of(p.raw.begin(), p.raw.end(), [&](double v) { return v == p.raw[0]; })) {
            CHECK(mse == doctest::Approx(var).epsilon(1e-9));
        }
        // After the intercept is fitted the residual has zero mean, so both fitness kinds agree.
        CHECK(fitness_variance(scaled, p.target) <= mse + 1e-12 * std::max(1.0, var));
        CHECK(fitness_variance(scaled, p.target) == doctest::Approx(mse).epsilon(1e-9));
    }
}

TEST_CASE("property: variance never exceeds MSE")
{
    Rng rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t m = 2 + uniform_index(rng, 60);
        std::vector<double> a(m), b(m);
        for (std::size_t i = 0; i < m; ++i) {
            a[i] = uniform_real(rng, -4, 4);
            b[i] = uniform_real(rng, -4, 4);
        }
        CHECK(fitness_variance(a, b) <= fitness_mse(a, b) + 1e-12);
    }
}

TEST_CASE("property: post-scaling fitness is invariant under affine changes of the raw semantics")
{
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t pop = 12;
        const std::size_t m = 30;
        std::vector<double> t(m);
        for (double& v : t) v = uniform_real(rng, -2, 2);
        std::vector<double> before, after;
        for (std::size_t j = 0; j < pop; ++j) {
            std::vector<double> raw(m);
            for (double& v : raw) v = uniform_real(rng, -3, 3);
            const double c = uniform_real(rng, -10, 10);
            double d = uniform_real(rng, 0.1, 10);
            if (bernoulli(rng, 0.5)) d = -d;
            std::vector<double> moved(m);
            for (std::size_t i = 0; i < m; ++i) moved[i] = c + d * raw[i];
            before.push_back(fitness_variance(apply_scaling(raw, fit_scaling(raw, t)), t));
            after.push_back(fitness_variance(apply_scaling(moved, fit_scaling(moved, t)), t));
            CHECK(after.back() == doctest::Approx(before.back()).epsilon(1e-9));
        }
        std::vector<std::size_t> rank_before(pop), rank_after(pop);
        std::iota(rank_before.begin(), rank_before.end(), 0);
        std::iota(rank_after.begin(), rank_after.end(), 0);
        std::sort(rank_before.begin(), rank_before.end(), [&](auto l, auto r) { return before[l] < before[r]; });
        std::sort(rank_after.begin(), rank_after.end(), [&](auto l, auto r) { return after[l] < after[r]; });
        CHECK(rank_before == rank_after);
    }
}

TEST_CASE("predict_model applies stored coefficients")
{
    EvalCounter counter;
    ScaledModel model{ExprTree::variable(0), {1.0, -2.0}, 0, 0, 0.0, 0.0};
    const auto cases = FeatureMatrix::from_rows({{1}, {2}, {3}});
    CHECK(predict_model(model, cases, counter) == std::vector<double>{-1, -3, -5});
    CHECK(counter.total() == 3);
}
