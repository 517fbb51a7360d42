#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "nbhd/model.hpp"

namespace nbhd {

/// Reads the JSON model format. Exactly one of "agents" / "groups" must be
/// present; world sets are arrays of labels and "*" gives a constant
/// neighbourhood function. Throws FormatError naming the offending JSON path.
Model model_from_json(const nlohmann::json& doc);
Model parse_model(std::string_view text);
Model load_model(const std::filesystem::path& path);

/// Writes constant neighbourhood functions under "*".
nlohmann::json model_to_json(const Model& m);
void save_model(const Model& m, const std::filesystem::path& path);

/// Array of labels.
nlohmann::json world_set_to_json(const Domain& d, WorldSet x);

}  // namespace nbhd
