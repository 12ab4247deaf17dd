#include <doctest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "whkit/error.hpp"
#include "whkit/matrix_io.hpp"

using namespace whkit;

TEST_CASE("WHM1 header and payload layout is little-endian row-major") {
  Matrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  std::ostringstream out;
  write_whm(out, m);
  const std::string bytes = out.str();
  REQUIRE(bytes.size() == 4 + 8 + 8 + 6 * 8);
  CHECK(bytes.substr(0, 4) == "WHM1");
  CHECK(static_cast<unsigned char>(bytes[4]) == 2);
  CHECK(static_cast<unsigned char>(bytes[12]) == 3);
  for (int i = 5; i < 12; ++i) CHECK(bytes[i] == 0);
  // 2.0 is the second payload entry: 0x4000000000000000, most significant byte last.
  CHECK(static_cast<unsigned char>(bytes[20 + 8 + 7]) == 0x40);
}

TEST_CASE("WHM1 round trip preserves every bit, including infinities") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Matrix m(1 + trial, 7 - trial % 4);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng) * 1e3;
    m(0, 0) = kInfinity;
    std::stringstream io;
    write_whm(io, m);
    const Matrix back = read_whm(io);
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    CHECK(std::memcmp(back.data(), m.data(), sizeof(double) * m.size()) == 0);
  }
}

TEST_CASE("WHM1 rejects corrupt files") {
  std::istringstream magic("WHM2");
  CHECK_THROWS_AS(read_whm(magic), ParseError);
  std::ostringstream out;
  write_whm(out, Matrix::Ones(2, 2));
  std::istringstream truncated(out.str().substr(0, out.str().size() - 1));
  CHECK_THROWS_AS(read_whm(truncated), ParseError);
  std::istringstream trailing(out.str() + "x");
  CHECK_THROWS_AS(read_whm(trailing), ParseError);
}
