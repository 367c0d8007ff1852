#ifndef SGPDT_MODEL_IO_HPP
#define SGPDT_MODEL_IO_HPP

#include <filesystem>

#include <json.hpp>

#include "sgpdt/chain.hpp"

namespace sgpdt {

inline constexpr const char* kModelFormat = "sgpdt-model";
inline constexpr int kModelFormatVersion = 1;

// {"format": "sgpdt-model", "version": 1, "feature_count": d, "chain_index": k,
//  "members": [{"ext_iter", "int_iter", "a", "b", "train_fitness", "expr"}, ...]}
// Doubles are written in shortest round-trip form, so a reloaded model
// predicts bit-identically.
nlohmann::json model_to_json(const FinalModel& model);
FinalModel model_from_json(const nlohmann::json& doc); // throws DataError

void save_model(const FinalModel& model, const std::filesystem::path& path);
FinalModel load_model(const std::filesystem::path& path);

} // namespace sgpdt

#endif
