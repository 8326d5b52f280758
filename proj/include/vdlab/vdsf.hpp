#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vdlab/common.hpp"
#include "vdlab/lattice.hpp"

namespace vdlab {

/// Field snapshot file ("VDSF").  Layout, all integers unsigned 32-bit and
/// all values little-endian:
///
///   "VDSF" | version (=1) | dim | points_per_dim | period (f64)
///   | field count | per field: name length, name bytes
///   | per field, in the same order: row-major physical values (f64)
struct NamedArray {
  std::string name;
  RealVector values;
};

struct Snapshot {
  Lattice lattice;
  std::vector<NamedArray> fields;

  /// InputError when absent.
  const RealVector& field(const std::string& name) const;
};

inline constexpr std::uint32_t kVdsfVersion = 1;

std::string encode_vdsf(const Snapshot& snapshot);
Snapshot decode_vdsf(const std::string& bytes);

/// Atomic: writes a temporary sibling and renames it over `path`.
void write_vdsf(const std::filesystem::path& path, const Snapshot& snapshot);
Snapshot read_vdsf(const std::filesystem::path& path);

}  // namespace vdlab
