#ifndef SGPDT_RNG_HPP
#define SGPDT_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>

namespace sgpdt {

// One generator per trial; every random decision of a run is drawn from it.
using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline bool bernoulli(Rng& rng, double p)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

} // namespace sgpdt

#endif
