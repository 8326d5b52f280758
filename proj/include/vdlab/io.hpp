#pragma once

#include <filesystem>
#include <string>

namespace vdlab {

/// Writes `contents` to a temporary file next to `path`, then renames it into
/// place, so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Whole file as bytes; InputError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace vdlab
