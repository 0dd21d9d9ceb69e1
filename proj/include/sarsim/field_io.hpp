#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sarsim/environment.hpp"

namespace sarsim {

/// Binary field container, version 1. All integers u32 LE, all reals f64 LE.
///
///   offset  size  content
///   0       8     magic "SARFIELD"
///   8       4     format version (1)
///   12      4     field count (2: current, then wind)
///   per field:
///     +0    40    origin_x, origin_y, spacing_x, spacing_y, frame_dt
///     +40   16    nt, nx, ny, reserved (0)
///     +56   16*nt*nx*ny  (u, v) pairs, row-major over (time, x, y)
///
/// The covered extent is origin .. origin + spacing*(n-1) per axis and the time
/// span is 0 .. frame_dt*(nt-1). See docs/field-format.md.
inline constexpr char kFieldMagic[8] = {'S', 'A', 'R', 'F', 'I', 'E', 'L', 'D'};
inline constexpr std::uint32_t kFieldFormatVersion = 1;

std::vector<std::uint8_t> encode_fields(const FieldPair& fields);
/// Throws ParseError (with byte offset) on any malformed input.
FieldPair decode_fields(std::span<const std::uint8_t> bytes);

void save_fields(const FieldPair& fields, const std::filesystem::path& path);
FieldPair load_fields(const std::filesystem::path& path);

}  // namespace sarsim
