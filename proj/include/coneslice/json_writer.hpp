#pragma once

#include <ostream>

#include <json.hpp>

namespace coneslice {

/// Serializes with every floating-point number printed to 17 significant
/// digits. Non-finite numbers become null.
void write_json(std::ostream& os, const nlohmann::ordered_json& value, int indent = 2);

}  // namespace coneslice
