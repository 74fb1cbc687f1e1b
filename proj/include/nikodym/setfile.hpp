#pragma once

// Binary set file:
//   "NKDSET01" | u16 version=1 | u64 p | u32 m | u32 d | (m+1)×u64 modulus
//   | ceil(q^d/8) bytes bitmap, bit i (LSB first) = membership of point i.
// All integers little-endian.

#include "nikodym/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace nikodym {

inline constexpr char kSetMagic[8] = {'N', 'K', 'D', 'S', 'E', 'T', '0', '1'};
inline constexpr std::uint16_t kSetVersion = 1;

std::vector<std::uint8_t> encode_set(const PointSet& s);

struct LoadedSet {
    PointSet set;
    bool canonical_modulus = true;
};

/// Throws CorruptFile on any header or payload defect.
LoadedSet decode_set(std::span<const std::uint8_t> bytes);

void save_set(const std::filesystem::path& path, const PointSet& s);
LoadedSet load_set(const std::filesystem::path& path);

} // namespace nikodym
