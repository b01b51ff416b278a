#include "claw/field_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "claw/error.hpp"

namespace claw {

namespace {

constexpr char kMagic[8] = {'C', 'L', 'A', 'W', 'S', 'L', 'B', '1'};

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&v, bytes, sizeof(T));
    return v;
  }
}

template <typename T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is, const std::string& path) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw FormatError(path + ": truncated slab file");
  return to_little(v);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(const GridField& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot write " + path);
  os << "# dim=" << f.grid.dim << " nx=" << f.grid.nx << " lo=" << fmt17(f.grid.lo)
     << " hi=" << fmt17(f.grid.hi) << " bound_M=" << fmt17(f.bound_M) << "\n";
  os << (f.grid.dim == 1 ? "time,x,value\n" : "time,x,y,value\n");
  for (std::size_t n = 0; n < f.levels(); ++n) {
    const std::string t = fmt17(f.times[n]);
    for (std::size_t c = 0; c < f.grid.cells(); ++c) {
      const Point x = f.grid.center(c);
      os << t << ',' << fmt17(x[0]) << ',';
      if (f.grid.dim == 2) os << fmt17(x[1]) << ',';
      os << fmt17(f.data[n][c]) << '\n';
    }
  }
}

GridField read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot read " + path);
  std::string line;
  GridField f;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw FormatError(path + ": missing grid header");
  {
    std::istringstream hs(line.substr(2));
    std::string kv;
    int seen = 0;
    while (hs >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw FormatError(path + ": bad header token " + kv);
      const std::string key = kv.substr(0, eq);
      const double val = std::stod(kv.substr(eq + 1));
      if (key == "dim") f.grid.dim = static_cast<int>(val), ++seen;
      else if (key == "nx") f.grid.nx = static_cast<int>(val), ++seen;
      else if (key == "lo") f.grid.lo = val, ++seen;
      else if (key == "hi") f.grid.hi = val, ++seen;
      else if (key == "bound_M") f.bound_M = val;
      else throw FormatError(path + ": unknown header key " + key);
    }
    if (seen != 4) throw FormatError(path + ": incomplete grid header");
  }
  std::getline(is, line);  // column names
  const std::size_t cells = f.grid.cells();
  const int columns = f.grid.dim + 2;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> cols;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cols.push_back(std::stod(cell));
    if (static_cast<int>(cols.size()) != columns) throw FormatError(path + ": wrong column count");
    if (row % cells == 0) {
      f.times.push_back(cols[0]);
      f.data.emplace_back();
      f.data.back().reserve(cells);
    }
    f.data.back().push_back(cols.back());
    ++row;
  }
  if (row == 0 || row % cells != 0) throw FormatError(path + ": row count is not a multiple of the cell count");
  return f;
}

void write_slab(const GridField& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot write " + path);
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.dim));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.nx));
  put<std::uint64_t>(os, f.levels());
  put<double>(os, f.grid.dx());
  put<double>(os, f.grid.lo);
  put<double>(os, f.bound_M);
  for (std::size_t n = 0; n < f.levels(); ++n) {
    put<double>(os, f.times[n]);
    for (double v : f.data[n]) put<double>(os, v);
  }
}

GridField read_slab(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot read " + path);
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw FormatError(path + ": not a slab file");
  GridField f;
  f.grid.dim = static_cast<int>(get<std::uint32_t>(is, path));
  f.grid.nx = static_cast<int>(get<std::uint32_t>(is, path));
  const auto levels = get<std::uint64_t>(is, path);
  const double dx = get<double>(is, path);
  f.grid.lo = get<double>(is, path);
  f.grid.hi = f.grid.lo + dx * f.grid.nx;
  f.bound_M = get<double>(is, path);
  if (f.grid.dim < 1 || f.grid.dim > 2 || f.grid.nx < 1) throw FormatError(path + ": bad grid header");
  for (std::uint64_t n = 0; n < levels; ++n) {
    f.times.push_back(get<double>(is, path));
    std::vector<double> slab(f.grid.cells());
    for (double& v : slab) v = get<double>(is, path);
    f.data.push_back(std::move(slab));
  }
  return f;
}

GridField read_field(const std::string& path) {
  auto ends_with = [&](const std::string& s) {
    return path.size() >= s.size() && path.compare(path.size() - s.size(), s.size(), s) == 0;
  };
  if (ends_with(".csv")) return read_csv(path);
  if (ends_with(".slab")) return read_slab(path);
  throw FormatError(path + ": expected a .csv or .slab file");
}

}  // namespace claw
