#pragma once

#include <filesystem>
#include <string>

#include "vdlab/harness.hpp"

namespace vdlab {

/// Comma-separated table: one header row of column names, then one row per
/// record with every value printed as %.16e (17 significant digits, so
/// values round-trip exactly).
std::string format_csv(const harness::DecayTable& table);

/// Inverse of format_csv.  InputError on a missing header, ragged rows or
/// cells that are not numbers (the message names the line).
harness::DecayTable parse_csv(const std::string& text);

void write_csv(const std::filesystem::path& path, const harness::DecayTable& table);
harness::DecayTable read_csv(const std::filesystem::path& path);

}  // namespace vdlab
