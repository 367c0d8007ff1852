#ifndef SGPDT_CONFIG_HPP
#define SGPDT_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "sgpdt/scaling.hpp"

namespace sgpdt {

enum class Variant {
    SgpDt, // variance fitness, full function set
    DtEm,  // MSE fitness
    DtNm,  // no Min/Max
};

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view text); // throws ConfigError

struct SplitSpec {
    double test_fraction = 0.25;
    double val_fraction_of_train = 0.10;
};

struct RunConfig {
    Variant variant = Variant::SgpDt;
    std::size_t pop_size = 1000;
    std::size_t n_ext = 20;
    std::size_t n_int = 50;
    std::size_t init_max_depth = 4;
    std::size_t mutation_max_depth = 5;
    double leaf_bias = 0.70;
    std::size_t tournament_k = 4;
    std::size_t rolling_window = 20;
    std::size_t elite_size = 1;
    std::uint64_t seed = 0;
    SplitSpec split;
    // Evaluate each generation with the OpenMP kernel. Results are identical
    // either way.
    bool parallel_eval = true;

    FitnessKind fitness_kind() const noexcept
    {
        return variant == Variant::DtEm ? FitnessKind::Mse : FitnessKind::Variance;
    }
    bool uses_min_max() const noexcept { return variant != Variant::DtNm; }

    void validate() const; // throws ConfigError
};

} // namespace sgpdt

#endif
