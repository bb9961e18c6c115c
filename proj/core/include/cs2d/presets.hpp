#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cs2d {

/// Names of the built-in scenarios.
std::vector<std::string> preset_names();

/// The scenario document of a preset. Throws InvalidConfig for an unknown
/// name.
nlohmann::json preset_document(const std::string& name);

}  // namespace cs2d
