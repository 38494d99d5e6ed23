#pragma once

// Flat JSON scenario documents: {"grid.width": 3, "v": 100, ...}.

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "edgeplace/simulator.hpp"

namespace edgeplace {

/// Keys accepted in a config document, in serialization order.
std::span<const std::string_view> config_keys();

/// Missing keys keep the paper defaults. Throws ConfigError naming the key on
/// an unknown key, a wrong JSON type or an out-of-range value.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Reads the file, applies `key=value` overrides, then parses. A value that is
/// valid JSON is taken as such ("v=10" is a number); anything else is a string.
Scenario parse_config(const std::filesystem::path& path,
                      std::span<const std::string> overrides = {});
Scenario parse_config_text(const std::string& text,
                           std::span<const std::string> overrides = {});

void apply_override(nlohmann::json& doc, const std::string& assignment);

std::string serialize_config(const Scenario& scenario);

}  // namespace edgeplace
