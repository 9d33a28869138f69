#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "mvce/error.hpp"
#include "mvce/linalg.hpp"

namespace mvce {
namespace {

constexpr std::array<unsigned char, 6> kMagic = {0x4D, 0x56, 0x43, 0x45, 0x31, 0x00};

template <typename T>
T to_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

template <typename T>
void write_le(std::ostream& out, T v) {
  v = to_little_endian(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError("truncated binary matrix file");
  return to_little_endian(v);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

DataMatrix load_csv(const std::filesystem::path& path, bool header) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (header && line_no == 1) continue;
    if (trim(line).empty()) continue;
    std::size_t col = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      std::string_view field = trim(rest.substr(0, comma));
      ++col;
      double v = 0.0;
      const auto* first = field.data();
      const auto* last = field.data() + field.size();
      if (!field.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (field.empty() || ec != std::errc() || ptr != last) {
        throw FormatError("cannot parse '" + std::string(field) + "' as a number", line_no, col);
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows == 0) {
      cols = col;
    } else if (col != cols) {
      throw FormatError("ragged row: expected " + std::to_string(cols) + " fields, found " +
                            std::to_string(col),
                        line_no);
    }
    ++rows;
  }
  if (rows == 0) throw FormatError("no data rows in " + path.string());
  RowMatrix m = Eigen::Map<RowMatrix>(values.data(), static_cast<Eigen::Index>(rows),
                                      static_cast<Eigen::Index>(cols));
  return DataMatrix(std::move(m));
}

DataMatrix load_bin(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::array<unsigned char, 6> magic{};
  in.read(reinterpret_cast<char*>(magic.data()), magic.size());
  if (!in || magic != kMagic) throw FormatError("bad magic bytes in " + path.string());
  const auto n = read_le<std::uint64_t>(in);
  const auto d = read_le<std::uint64_t>(in);
  const std::uint64_t limit = std::uint64_t{1} << 40;
  if (n > limit || d > limit || (d != 0 && n > limit / d)) {
    throw FormatError("implausible matrix size in header");
  }
  RowMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(n * d * sizeof(double)));
  if (!in) throw FormatError("truncated binary matrix payload");
  if constexpr (std::endian::native == std::endian::big) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = to_little_endian(m.data()[i]);
  }
  return DataMatrix(std::move(m));
}

}  // namespace

MatrixFormat format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".bin" || ext == ".mvce") ? MatrixFormat::bin : MatrixFormat::csv;
}

DataMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format, bool header) {
  return format == MatrixFormat::csv ? load_csv(path, header) : load_bin(path);
}

void save_matrix(const DataMatrix& x, const std::filesystem::path& path, MatrixFormat format) {
  const auto& v = x.values();
  if (format == MatrixFormat::bin) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(kMagic.data()), kMagic.size());
    write_le<std::uint64_t>(out, x.rows());
    write_le<std::uint64_t>(out, x.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) write_le<double>(out, v.data()[i]);
    if (!out) throw FormatError("write failed for " + path.string());
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  std::array<char, 32> buf{};
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      if (j) out << ',';
      // Shortest representation that round-trips exactly.
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v(i, j));
      out.write(buf.data(), ptr - buf.data());
    }
    out << '\n';
  }
  if (!out) throw FormatError("write failed for " + path.string());
}

}  // namespace mvce
