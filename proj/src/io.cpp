#include "ctgibbs/io.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ctgibbs {

namespace {

constexpr char kMagic[8] = {'C', 'T', 'G', 'B', 'I', 'N', '1', '\0'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kDtypeF64 = 1;

void put_u32(char* buf, std::size_t off, std::uint32_t v) { std::memcpy(buf + off, &v, 4); }
void put_u64(char* buf, std::size_t off, std::uint64_t v) { std::memcpy(buf + off, &v, 8); }
std::uint32_t get_u32(const char* buf, std::size_t off) {
  std::uint32_t v;
  std::memcpy(&v, buf + off, 4);
  return v;
}
std::uint64_t get_u64(const char* buf, std::size_t off) {
  std::uint64_t v;
  std::memcpy(&v, buf + off, 8);
  return v;
}

void write_array(const std::filesystem::path& path, const double* data, std::uint64_t rows,
                 std::uint64_t cols, std::uint32_t rank) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open " + path.string() + " for writing");
  std::array<char, 64> header{};
  std::memcpy(header.data(), kMagic, 8);
  put_u32(header.data(), 8, kVersion);
  put_u32(header.data(), 12, kDtypeF64);
  put_u32(header.data(), 16, rank);
  put_u64(header.data(), 24, rows);
  put_u64(header.data(), 32, cols);
  f.write(header.data(), header.size());
  f.write(reinterpret_cast<const char*>(data),
          static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!f) throw DataError("short write to " + path.string());
}

Mat read_array(const std::filesystem::path& path, std::uint32_t expected_rank) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open " + path.string());
  std::array<char, 64> header{};
  f.read(header.data(), header.size());
  if (!f || std::memcmp(header.data(), kMagic, 8) != 0) {
    throw DataError(path.string() + ": not a ctgibbs array file");
  }
  if (get_u32(header.data(), 8) != kVersion) throw DataError(path.string() + ": unknown version");
  if (get_u32(header.data(), 12) != kDtypeF64) throw DataError(path.string() + ": unknown dtype");
  const std::uint32_t rank = get_u32(header.data(), 16);
  if (rank != expected_rank) {
    throw DataError(path.string() + ": expected rank " + std::to_string(expected_rank));
  }
  const std::uint64_t rows = get_u64(header.data(), 24);
  const std::uint64_t cols = get_u64(header.data(), 32);
  if (rows == 0 || cols == 0) throw DataError(path.string() + ": empty array");
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  f.read(reinterpret_cast<char*>(m.data()),
         static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!f) throw DataError(path.string() + ": truncated payload");
  return m;
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Eigen::Ref<const Mat>& m) {
  Mat contiguous = m;
  write_array(path, contiguous.data(), static_cast<std::uint64_t>(m.rows()),
              static_cast<std::uint64_t>(m.cols()), 2);
}

void write_vector(const std::filesystem::path& path, const Eigen::Ref<const Vec>& v) {
  Vec contiguous = v;
  write_array(path, contiguous.data(), static_cast<std::uint64_t>(v.size()), 1, 1);
}

Mat read_matrix(const std::filesystem::path& path) { return read_array(path, 2); }

Vec read_vector(const std::filesystem::path& path) {
  Mat m = read_array(path, 1);
  return m.col(0);
}

void write_meta(const std::filesystem::path& path,
                const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw DataError("cannot open " + path.string() + " for writing");
  for (const auto& [k, v] : entries) f << k << " = " << v << "\n";
  if (!f) throw DataError("short write to " + path.string());
}

MetaMap read_meta(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open " + path.string());
  MetaMap out;
  std::string line;
  while (std::getline(f, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError(path.string() + ": malformed line '" + line + "'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::pair<double, double> write_pgm16(const std::filesystem::path& path,
                                      const Eigen::Ref<const Mat>& image) {
  const double lo = image.minCoeff();
  const double hi = image.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open " + path.string() + " for writing");
  f << "P5\n" << image.cols() << " " << image.rows() << "\n65535\n";
  for (Eigen::Index r = 0; r < image.rows(); ++r) {
    const Eigen::Index i = image.rows() - 1 - r;
    for (Eigen::Index j = 0; j < image.cols(); ++j) {
      const double t = (image(i, j) - lo) / span;
      const auto v = static_cast<std::uint16_t>(std::lround(t * 65535.0));
      const char bytes[2] = {static_cast<char>(v >> 8), static_cast<char>(v & 0xFF)};
      f.write(bytes, 2);
    }
  }
  if (!f) throw DataError("short write to " + path.string());
  return {lo, hi};
}

}  // namespace ctgibbs
