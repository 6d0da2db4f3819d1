#pragma once

#include <filesystem>
#include <string_view>

#include "wfl/common/bytes.hpp"

namespace wfl {

Bytes read_file(const std::filesystem::path& path);

// Writes to a sibling temp file and renames over `path` on success, so a
// failed write never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, ByteView data);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace wfl
