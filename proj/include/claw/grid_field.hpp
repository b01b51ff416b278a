#ifndef CLAW_GRID_FIELD_HPP_
#define CLAW_GRID_FIELD_HPP_

#include <cstddef>
#include <vector>

#include "claw/point.hpp"

namespace claw {

// Uniform grid on the box [lo, hi]^dim with nx cells per axis. Cells are
// stored x-fastest: index = j * nx + i.
struct Grid {
  int dim = 1;
  double lo = 0.0;
  double hi = 1.0;
  int nx = 1;

  double dx() const { return (hi - lo) / nx; }
  std::size_t cells() const { return dim == 1 ? std::size_t(nx) : std::size_t(nx) * nx; }
  double coord(int i) const { return lo + (i + 0.5) * dx(); }
  Point center(std::size_t index) const;
  double cell_volume() const { return dim == 1 ? dx() : dx() * dx(); }
  bool same_as(const Grid& other) const;
  Grid refined() const;
};

// Cell-averaged space-time field. One slab of cell values per stored time level.
struct GridField {
  Grid grid;
  std::vector<double> times;
  std::vector<std::vector<double>> data;
  double bound_M = 0.0;

  std::size_t levels() const { return times.size(); }
  // Index of the stored level equal to t; throws MissingTimeLevels otherwise.
  std::size_t level_index(double t) const;
  double max_abs(std::size_t level) const;
};

// Throws GridMismatch unless a and b share grid and stored time levels.
void require_compatible(const GridField& a, const GridField& b);

}  // namespace claw

#endif  // CLAW_GRID_FIELD_HPP_
