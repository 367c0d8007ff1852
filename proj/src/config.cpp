#include "sgpdt/config.hpp"

#include "sgpdt/error.hpp"

namespace sgpdt {

std::string_view variant_name(Variant v)
{
    switch (v) {
    case Variant::SgpDt: return "sgpdt";
    case Variant::DtEm: return "dt-em";
    case Variant::DtNm: return "dt-nm";
    }
    return "?";
}

Variant parse_variant(std::string_view text)
{
    if (text == "sgpdt" || text == "sgp-dt") {
        return Variant::SgpDt;
    }
    if (text == "dt-em") {
        return Variant::DtEm;
    }
    if (text == "dt-nm") {
        return Variant::DtNm;
    }
    throw ConfigError("unknown variant '" + std::string(text) + "' (expected sgpdt, dt-em or dt-nm)");
}

void RunConfig::validate() const
{
    auto check = [](bool ok, const std::string& what) {
        if (!ok) {
            throw ConfigError(what);
        }
    };
    check(pop_size >= 2, "pop_size must be at least 2");
    check(n_ext >= 1, "n_ext must be at least 1");
    check(n_int >= 1, "n_int must be at least 1");
    check(init_max_depth >= 1, "init_max_depth must be at least 1");
    check(mutation_max_depth >= 1, "mutation_max_depth must be at least 1");
    check(leaf_bias >= 0.0 && leaf_bias <= 1.0, "leaf_bias must lie in [0, 1]");
    check(tournament_k >= 1, "tournament size must be at least 1");
    check(rolling_window >= 1, "rolling window must be at least 1");
    check(elite_size >= 1 && elite_size < pop_size, "elite_size must lie in [1, pop_size)");
    check(split.test_fraction > 0.0 && split.test_fraction <= 0.5, "test fraction must lie in (0, 0.5]");
    check(split.val_fraction_of_train > 0.0 && split.val_fraction_of_train <= 0.5,
          "validation fraction must lie in (0, 0.5]");
}

} // namespace sgpdt
