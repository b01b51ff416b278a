#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "claw/error.hpp"
#include "claw/field_io.hpp"

using namespace claw;
namespace fs = std::filesystem;

namespace {

GridField sample_field(int dim) {
  GridField f;
  f.grid = Grid{dim, -1.0, 2.0, 5};
  f.times = {0.0, 0.125, 1.0 / 3.0};
  for (std::size_t l = 0; l < f.times.size(); ++l) {
    std::vector<double> s(f.grid.cells());
    for (std::size_t c = 0; c < s.size(); ++c) s[c] = 0.1 * c - 1.0 / (3.0 + l) + 1e-17 * c;
    f.data.push_back(s);
  }
  f.bound_M = 1.7;
  return f;
}

fs::path temp(const std::string& name) { return fs::temp_directory_path() / ("claw_io_" + name); }

void check_same(const GridField& a, const GridField& b) {
  CHECK(a.grid.same_as(b.grid));
  CHECK(a.grid.nx == b.grid.nx);
  CHECK(a.times == b.times);
  CHECK(a.data == b.data);
  CHECK(a.bound_M == b.bound_M);
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g{2, -1, 1, 4};
  CHECK(g.dx() == 0.5);
  CHECK(g.cells() == 16);
  CHECK(g.center(5)[0] == -0.25);
  CHECK(g.center(5)[1] == -0.25);
  CHECK(g.center(3)[0] == 0.75);
  CHECK(g.cell_volume() == 0.25);
  CHECK(g.refined().nx == 8);
}

TEST_CASE("level lookup and compatibility") {
  const GridField f = sample_field(1);
  CHECK(f.level_index(0.125) == 1);
  CHECK_THROWS_AS(f.level_index(0.2), MissingTimeLevels);
  GridField g = f;
  g.grid.nx = 6;
  CHECK_THROWS_AS(require_compatible(f, g), GridMismatch);
  GridField h = f;
  h.times[2] = 0.5;
  CHECK_THROWS_AS(require_compatible(f, h), GridMismatch);
  CHECK_NOTHROW(require_compatible(f, f));
}

TEST_CASE("CSV and slab round-trips are exact") {
  for (int dim : {1, 2}) {
    const GridField f = sample_field(dim);
    const fs::path csv = temp("rt.csv"), slab = temp("rt.slab");
    write_csv(f, csv.string());
    write_slab(f, slab.string());
    check_same(f, read_csv(csv.string()));
    check_same(f, read_slab(slab.string()));
    check_same(f, read_field(slab.string()));
    fs::remove(csv);
    fs::remove(slab);
  }
}

TEST_CASE("slab byte layout") {
  const GridField f = sample_field(1);
  const fs::path p = temp("layout.slab");
  write_slab(f, p.string());
  std::ifstream in(p, std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), {});
  REQUIRE(bytes.size() == 48 + 3 * (8 + 5 * 8));
  CHECK(std::string(bytes.data(), 8) == "CLAWSLB1");
  CHECK(static_cast<unsigned char>(bytes[8]) == 1);   // dim, little endian
  CHECK(static_cast<unsigned char>(bytes[12]) == 5);  // nx
  CHECK(static_cast<unsigned char>(bytes[16]) == 3);  // levels
  double dx = 0.0, origin = 0.0;
  std::memcpy(&dx, bytes.data() + 24, 8);
  std::memcpy(&origin, bytes.data() + 32, 8);
  CHECK(dx == 0.6);
  CHECK(origin == -1.0);
  fs::remove(p);
}

TEST_CASE("malformed files") {
  const fs::path p = temp("bad.slab");
  {
    std::ofstream out(p, std::ios::binary);
    out << "NOTASLAB";
  }
  CHECK_THROWS_AS(read_slab(p.string()), FormatError);
  const fs::path c = temp("bad.csv");
  {
    std::ofstream out(c);
    out << "# dim=1 nx=2 lo=0 hi=1 bound_M=1\ntime,x,value\n0,0.25,1\n";
  }
  CHECK_THROWS_AS(read_csv(c.string()), FormatError);
  CHECK_THROWS_AS(read_field(temp("x.txt").string()), FormatError);
  CHECK_THROWS_AS(read_slab(temp("missing.slab").string()), FormatError);
  fs::remove(p);
  fs::remove(c);
}
