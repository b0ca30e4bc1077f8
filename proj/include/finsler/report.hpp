#pragma once

#include <json.hpp>
#include <string>

namespace finsler {

using Json = nlohmann::ordered_json;

// Deterministic serializer: keys keep insertion order and every number is
// written with 17 significant digits, so identical runs produce identical
// bytes regardless of the JSON library's shortest-round-trip heuristics.
std::string dump_deterministic(const Json& j, int indent = 2);

void write_report_file(const Json& j, const std::string& path);

}  // namespace finsler
