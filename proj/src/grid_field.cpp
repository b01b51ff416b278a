#include "claw/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "claw/error.hpp"

namespace claw {

namespace {
bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }
}  // namespace

Point Grid::center(std::size_t index) const {
  if (dim == 1) return {coord(static_cast<int>(index)), 0.0};
  return {coord(static_cast<int>(index % nx)), coord(static_cast<int>(index / nx))};
}

bool Grid::same_as(const Grid& o) const {
  return dim == o.dim && nx == o.nx && close(lo, o.lo) && close(hi, o.hi);
}

Grid Grid::refined() const {
  Grid g = *this;
  g.nx *= 2;
  return g;
}

std::size_t GridField::level_index(double t) const {
  for (std::size_t n = 0; n < times.size(); ++n)
    if (close(times[n], t)) return n;
  std::ostringstream os;
  os << "time " << t << " is not a stored level";
  throw MissingTimeLevels(os.str());
}

double GridField::max_abs(std::size_t level) const {
  double m = 0.0;
  for (double v : data.at(level)) m = std::max(m, std::abs(v));
  return m;
}

void require_compatible(const GridField& a, const GridField& b) {
  if (!a.grid.same_as(b.grid)) throw GridMismatch("fields live on different grids");
  if (a.times.size() != b.times.size()) throw GridMismatch("fields store different numbers of time levels");
  for (std::size_t n = 0; n < a.times.size(); ++n)
    if (!close(a.times[n], b.times[n])) throw GridMismatch("fields store different time levels");
}

}  // namespace claw
