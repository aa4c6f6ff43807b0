#pragma once

#include <string>

#include <json.hpp>

namespace entdist {

/// Fixed float formatting for regression artifacts: 12 significant digits,
/// lowercase scientific outside [1e-6, 1e6). Stable under parse/re-format.
std::string format_float(double x);

/// Canonical JSON serialization: lexicographic key order, no whitespace,
/// floats via format_float. Parsing the output and re-serializing is
/// byte-identical.
std::string canonical_json(const nlohmann::json& j);

}  // namespace entdist
