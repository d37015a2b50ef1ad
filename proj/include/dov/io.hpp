#pragma once

#include "dov/bodies.hpp"
#include "dov/combine.hpp"
#include "dov/functions.hpp"
#include "dov/grid.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace dov {

using Json = nlohmann::json;

/// Inline JSON (text starting with '{' or '[') or a path to a JSON file.
Json load_json(std::string_view text_or_path);

/// Like load_json, plus the shorthands p:<x> (power), log and identity.
Json load_function_arg(std::string_view text_or_path);

/// Number with 17 significant digits; non-finite values become null.
std::string fmt17(double x);

/// Serializes with fmt17 numbers and sorted object keys (nlohmann default).
std::string dump17(const Json& j, int indent = 2);

Json to_json(const Vec& v);
Vec vec_from_json(const Json& j, const char* what);

/// Bodies: ball, ellipsoid, cube, polygon, polytope, hull, samples, scaled, polar.
/// `grid` is used by "samples" bodies that name no grid of their own.
StarBody parse_body(const Json& j, const GridPtr& grid = nullptr);
Json body_to_json(const StarBody& body);

OrliczFn parse_phi(const Json& j);
PsiFn parse_psi(const Json& j);
MultiPhi parse_multi_phi(const Json& j);
/// `n` is the ambient dimension (used for default Q = unit ball).
GFn parse_G(const Json& j, int n);
DiscreteMeasure parse_measure(const Json& j);
Json measure_to_json(const DiscreteMeasure& mu);

/// JSON schema for one of: body, phi, psi, multi_phi, G, measure, report.
Json schema(std::string_view what);
std::vector<std::string> schema_names();

/// Writes to `path`, or stdout when empty.
void write_text(const std::string& text, const std::optional<std::string>& path);

}  // namespace dov
