#include "whkit/matrix_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

#include "whkit/error.hpp"

namespace whkit {

namespace {

constexpr std::array<char, 4> kMagic{'W', 'H', 'M', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(bytes.data(), bytes.size());
}

bool get_u64(std::istream& in, std::uint64_t& v) {
  std::array<unsigned char, 8> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return true;
}

}  // namespace

void write_whm(std::ostream& out, const Matrix& m) {
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) put_u64(out, std::bit_cast<std::uint64_t>(m(i, j)));
}

Matrix read_whm(std::istream& in, const std::string& source) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw ParseError(source, 0, "missing WHM1 magic");
  std::uint64_t rows = 0, cols = 0;
  if (!get_u64(in, rows) || !get_u64(in, cols)) throw ParseError(source, 0, "truncated WHM1 header");
  if (rows > (1u << 20) || cols > (1u << 20)) throw ParseError(source, 0, "implausible WHM1 dimensions");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::uint64_t bits = 0;
      if (!get_u64(in, bits)) throw ParseError(source, 0, "truncated WHM1 payload");
      m(i, j) = std::bit_cast<double>(bits);
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ParseError(source, 0, "trailing bytes after WHM1 payload");
  return m;
}

void save_whm(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_whm(out, m);
  if (!out) throw IoError("write failed: " + path.string());
}

Matrix load_whm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  return read_whm(in, path.string());
}

void save_values(const std::filesystem::path& path, const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << std::setprecision(17);
  for (double v : values) out << v << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace whkit
