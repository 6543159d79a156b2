/**
 * @file file_values.hpp
 * @brief Internal helpers for reading structured parameter files (JSON or
 *        TOML, chosen by extension) and decoding common value shapes.
 */

#pragma once

#include <string>

#include <json.hpp>

#include "ntstsm/rigidbody.hpp"

namespace ntstsm {

/// Read and parse a .json or .toml file.
nlohmann::json load_structured_file(const std::string& path);

/// Slurp a file into a string (throws ConfigError when unreadable).
std::string read_text_file(const std::string& path);

Vec3 vec3_from_json(const nlohmann::json& j, const std::string& what);
VectorXd vecn_from_json(const nlohmann::json& j, const std::string& what);

/// Transform from {"xyz": [...], "rpy": [...]} or {"xyz": [...], "quat": [eta,x,y,z]}.
Iso3 transform_from_json(const nlohmann::json& j);

ChainModel chain_from_json(const nlohmann::json& j);
FrictionModel friction_from_json(const nlohmann::json& j, int dof);

}  // namespace ntstsm
