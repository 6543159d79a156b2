/**
 * @file toml_lite.hpp
 * @brief Minimal TOML reader covering the subset used by the config files:
 *        tables, arrays of tables, dotted/bare/quoted keys, strings, numbers,
 *        booleans, arrays, and inline tables. Produces a nlohmann::json tree.
 */

#pragma once

#include <string>

#include <json.hpp>

namespace ntstsm::toml_lite {

/// Parse TOML text. Throws ntstsm::ConfigError with a line number on errors.
nlohmann::json parse(const std::string& text);

}  // namespace ntstsm::toml_lite
