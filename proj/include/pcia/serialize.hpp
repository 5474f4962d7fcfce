#pragma once

#include <string>

#include "pcia/channel.hpp"
#include "pcia/feasibility.hpp"

#include "json.hpp"

namespace pcia {

// JSON conventions: complex scalars are [re, im]; matrices are row-major
// nested arrays of complex scalars.

nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const FreedomConstraintInstance& inst);
FreedomConstraintInstance instance_from_json(const nlohmann::json& j);

/// Full dump of a generated drop (channels, null-space ranks and bases,
/// scene/layout when present) for cross-implementation comparisons.
nlohmann::json network_to_json(const NetworkInstance& net);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pcia
