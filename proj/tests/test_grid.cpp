#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "nhtopo/grid.hpp"
#include "nhtopo/models.hpp"

using namespace nhtopo;

namespace {

std::string header_then(const std::string& header, std::size_t doubles, double fill = 0.0) {
  std::string s = header + "\n";
  for (std::size_t i = 0; i < doubles; ++i) {
    char b[8];
    std::memcpy(b, &fill, 8);  // host is little-endian
    s.append(b, 8);
  }
  return s;
}

GridModel load(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return load_grid_model(in);
}

std::size_t failing_offset(const std::string& bytes) {
  try {
    load(bytes);
  } catch (const GridFormatError& e) {
    return e.offset();
  }
  return std::numeric_limits<std::size_t>::max();
}

}  // namespace

TEST_CASE("zero grid of 2x2 matrices loads with 8 nodes") {
  const GridModel g = load(header_then("NHGRID1 N=2 D=3 AXES=2,2,2 PERIODIC=1,1,1", 8 * 4 * 2));
  CHECK(g.node_count() == 8);
  CHECK(g.bands == 2);
  for (const auto& z : g.data) CHECK(z == std::complex<double>(0, 0));
}

TEST_CASE("grid with too little data is a dimension mismatch") {
  const std::string header = "NHGRID1 N=2 D=1 AXES=8 PERIODIC=1";
  const std::string bytes = header_then(header, 3 * 4 * 2);
  CHECK_THROWS_AS(load(bytes), GridFormatError);
  CHECK(failing_offset(bytes) == bytes.size());
  // Trailing bytes are rejected as well.
  CHECK_THROWS_AS(load(header_then(header, 9 * 4 * 2)), GridFormatError);
}

TEST_CASE("malformed headers report the offending byte") {
  CHECK(failing_offset(header_then("NHGRIDX N=2 D=1 AXES=2 PERIODIC=1", 16)) == 0);
  const std::string bad_axes = "NHGRID1 N=2 D=1 AXES=2x PERIODIC=1";
  CHECK(failing_offset(header_then(bad_axes, 16)) == bad_axes.find("2x"));
  CHECK_THROWS_AS(load(header_then("NHGRID1 N=2 D=2 AXES=2 PERIODIC=1", 16)), GridFormatError);
  CHECK_THROWS_AS(load(header_then("NHGRID1 N=2 D=1 AXES=2", 16)), GridFormatError);
  CHECK_THROWS_AS(load("NHGRID1 N=2 D=1 AXES=2 PERIODIC=1"), GridFormatError);
}

TEST_CASE("non-finite entries are rejected with their offset") {
  const std::string header = "NHGRID1 N=1 D=1 AXES=2 PERIODIC=0";
  std::string bytes = header_then(header, 4);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::memcpy(&bytes[header.size() + 1 + 24], &nan, 8);
  CHECK(failing_offset(bytes) == header.size() + 1 + 24);
}

TEST_CASE("sampled lattice grid round-trips bit-exactly") {
  const BlochModel model = BlochModel::lattice(LatticeVariant::Main, 2.0);
  const GridModel g = sample_grid(model, {8, 8, 8});
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  save_grid_model(buf, g);
  const GridModel back = load_grid_model(buf);
  REQUIRE(back.node_count() == 512);
  CHECK(back.data == g.data);
  const BlochModel gm = BlochModel::grid(std::make_shared<const GridModel>(back));
  for (std::size_t flat = 0; flat < back.node_count(); ++flat) {
    const Momentum k = back.node_momentum(flat);
    CHECK((gm(k) - model(k)).norm() == 0.0);
  }
}

TEST_CASE("custom ranges survive a round trip") {
  const BlochModel model = BlochModel::kp(1.0);
  const GridModel g = sample_grid(model, {3, 4, 5}, {-1, -1, -0.5}, {1, 1, 0.5});
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  save_grid_model(buf, g);
  const GridModel back = load_grid_model(buf);
  CHECK(back.lo == g.lo);
  CHECK(back.hi == g.hi);
  CHECK(back.data == g.data);
}

TEST_CASE("grid models refuse to interpolate") {
  const GridModel g = sample_grid(BlochModel::lattice(LatticeVariant::Supp, 0.5), {4, 4, 4});
  const BlochModel gm = BlochModel::grid(std::make_shared<const GridModel>(g));
  CHECK_NOTHROW(gm(Momentum{kPi / 2, kPi, 3 * kPi / 2}));
  CHECK_NOTHROW(gm(Momentum{-kPi / 2, kPi, -kPi / 2}));  // periodic axes wrap
  try {
    gm(Momentum{0.1, 0.0, 0.0});
    FAIL("expected GridAlignment");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridAlignment);
  }
}
