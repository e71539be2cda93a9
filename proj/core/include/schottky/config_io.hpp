#pragma once

#include "schottky/graph.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace schottky {

using json = nlohmann::ordered_json;

inline constexpr const char* kConvention = "phi-antihom-v1";

json to_json(cplx z);
json to_json(const SpherePoint& p);
/// Accepts [re, im] or a bare number.
cplx complex_from_json(const json& j);
/// Accepts [re, im], a bare number or "inf".
SpherePoint sphere_point_from_json(const json& j);

json to_json(const CurveConfig& cfg);
/// Throws InvalidInput for malformed documents, InvalidGraph for bad references.
CurveConfig curve_config_from_json(const json& j);

std::string serialize_curve_config(const CurveConfig& cfg);
CurveConfig parse_curve_config(const std::string& text);
CurveConfig load_curve_config(const std::string& path);

/// Reads a whole file; throws InvalidInput if it cannot be opened.
std::string read_text_file(const std::string& path);

} // namespace schottky
