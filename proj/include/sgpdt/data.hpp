#ifndef SGPDT_DATA_HPP
#define SGPDT_DATA_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "sgpdt/config.hpp"
#include "sgpdt/matrix.hpp"
#include "sgpdt/rng.hpp"

namespace sgpdt {

struct Dataset {
    std::string name;
    FeatureMatrix features;
    std::vector<double> targets;
    std::vector<std::string> feature_names;

    std::size_t size() const noexcept { return targets.size(); }
    std::size_t feature_count() const noexcept { return features.cols(); }

    Dataset subset(std::span<const std::size_t> rows) const;
};

// Column selector: header name or zero-based position.
using TargetColumn = std::variant<std::string, std::size_t>;

// Comma-separated numeric table with an optional header row. Throws DataError
// on empty, non-numeric or ragged input.
Dataset load_csv(const std::filesystem::path& path, const TargetColumn& target);
Dataset parse_csv(const std::string& text, const TargetColumn& target, std::string name = "data");

// Writes features then target, with a header, in shortest round-trip form.
void write_csv(const Dataset& data, const std::filesystem::path& path, const std::string& target_name = "y");
std::string format_csv(const Dataset& data, const std::string& target_name = "y");

struct Partition {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

// Half-up rounding of n * fraction.
std::size_t round_count(std::size_t n, double fraction);

// Random partition: the test rows are drawn first, then the validation rows
// from what remains. Throws ConfigError when a part would be empty.
Partition split(std::size_t n, const SplitSpec& spec, Rng& rng);

// 10 / (5 + sum_i (x_i - 3)^2) with five inputs uniform on [0.05, 6.05].
double uball5d(std::span<const double> x);
Dataset gen_uball5d(std::size_t n, Rng& rng);

inline constexpr std::size_t kUball5dDefaultSize = 6024;
inline constexpr std::size_t kMinDatasetSize = 10;

} // namespace sgpdt

#endif
