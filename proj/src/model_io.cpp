#include "sgpdt/model_io.hpp"

#include <fstream>

#include "sgpdt/error.hpp"

namespace sgpdt {

nlohmann::json model_to_json(const FinalModel& model)
{
    nlohmann::json members = nlohmann::json::array();
    for (const ScaledModel& m : model.members) {
        members.push_back({
            {"ext_iter", m.ext_iter},
            {"int_iter", m.int_iter},
            {"a", m.coeffs.a},
            {"b", m.coeffs.b},
            {"train_fitness", m.train_fitness},
            {"train_mse", m.train_mse},
            {"expr", m.tree.to_string()},
        });
    }
    return {
        {"format", kModelFormat},
        {"version", kModelFormatVersion},
        {"feature_count", model.feature_count},
        {"chain_index", model.chain_index},
        {"members", std::move(members)},
    };
}

FinalModel model_from_json(const nlohmann::json& doc)
{
    try {
        if (doc.at("format").get<std::string>() != kModelFormat) {
            throw DataError("not an sgpdt model document");
        }
        if (doc.at("version").get<int>() != kModelFormatVersion) {
            throw DataError("unsupported model version " + doc.at("version").dump());
        }
        FinalModel model;
        model.feature_count = doc.at("feature_count").get<std::size_t>();
        model.chain_index = doc.value("chain_index", std::size_t{0});
        for (const auto& m : doc.at("members")) {
            ScaledModel member;
            member.ext_iter = m.at("ext_iter").get<std::size_t>();
            member.int_iter = m.at("int_iter").get<std::size_t>();
            member.coeffs = {m.at("a").get<double>(), m.at("b").get<double>()};
            member.train_fitness = m.value("train_fitness", 0.0);
            member.train_mse = m.value("train_mse", 0.0);
            member.tree = ExprTree::parse(m.at("expr").get<std::string>());
            if (member.tree.has_variables() && member.tree.max_feature() >= model.feature_count) {
                throw DataError("model member refers to a feature beyond feature_count");
            }
            model.members.push_back(std::move(member));
        }
        if (model.members.empty()) {
            throw DataError("model has no members");
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed model document: ") + e.what());
    } catch (const ContractViolation& e) {
        throw DataError(std::string("malformed model expression: ") + e.what());
    }
}

void save_model(const FinalModel& model, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    out << model_to_json(model).dump(2) << '\n';
}

FinalModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return model_from_json(doc);
}

} // namespace sgpdt
