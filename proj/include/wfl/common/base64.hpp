#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "wfl/common/bytes.hpp"

namespace wfl {

// Standard alphabet with '=' padding.
std::string base64_encode(ByteView bytes);

/// std::nullopt unless `text` is canonical padded base64.
std::optional<Bytes> base64_decode(std::string_view text);

}  // namespace wfl
