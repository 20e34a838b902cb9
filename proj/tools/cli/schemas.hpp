#pragma once

#include <string_view>

#include <json.hpp>

namespace molcap::cli {

/// Parsed copy of a shipped schema, e.g. "capacity.config.schema.json".
/// Throws std::out_of_range for an unknown name.
const nlohmann::json& schema(std::string_view file_name);

}  // namespace molcap::cli
