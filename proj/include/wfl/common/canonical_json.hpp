#pragma once

#include "json.hpp"
#include <string>

namespace wfl {

using Json = nlohmann::json;

// Sorted keys (nlohmann objects are ordered maps), no whitespace, floats
// printed with 9 significant digits, non-finite floats as null.
std::string canonical_dump(const Json& value);

}  // namespace wfl
