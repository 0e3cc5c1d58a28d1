#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ctgibbs/types.hpp"

namespace ctgibbs {

// On-disk formats.
//
// Arrays: flat binary, little-endian, 64-byte header followed by the payload
// as float64 in column-major order.
//   offset  0  8 bytes  magic "CTGBIN1\0"
//   offset  8  u32      format version (1)
//   offset 12  u32      dtype (1 = float64)
//   offset 16  u32      rank (1 = vector, 2 = matrix)
//   offset 20  u32      reserved, zero
//   offset 24  u64      rows
//   offset 32  u64      cols (1 for vectors)
//   offset 40  24 bytes zero padding
//
// Metadata: text files of "key = value" lines; '#' starts a comment line.
//
// Images: 16-bit binary PGM (P5, maxval 65535, big-endian samples) after
// min-max scaling; the scaling bounds are returned so callers can record
// them.  PGM row r holds image row n-1-r, so +y points up in viewers.

void write_matrix(const std::filesystem::path& path, const Eigen::Ref<const Mat>& m);
void write_vector(const std::filesystem::path& path, const Eigen::Ref<const Vec>& v);
Mat read_matrix(const std::filesystem::path& path);
Vec read_vector(const std::filesystem::path& path);

using MetaMap = std::map<std::string, std::string>;

void write_meta(const std::filesystem::path& path,
                const std::vector<std::pair<std::string, std::string>>& entries);
MetaMap read_meta(const std::filesystem::path& path);

std::string format_double(double v);  // round-trippable decimal form

// Returns the min/max used for scaling.
std::pair<double, double> write_pgm16(const std::filesystem::path& path,
                                      const Eigen::Ref<const Mat>& image);

}  // namespace ctgibbs
