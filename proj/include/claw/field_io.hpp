#ifndef CLAW_FIELD_IO_HPP_
#define CLAW_FIELD_IO_HPP_

#include <string>

#include "claw/grid_field.hpp"

namespace claw {

// CSV with a '#'-prefixed grid header followed by rows
//   time,x[,y],value
// in level-major, cell-index order. Values use 17 significant digits so the
// file reproduces the field exactly.
void write_csv(const GridField& field, const std::string& path);
GridField read_csv(const std::string& path);

// Little-endian binary slab file. Layout (byte offsets):
//   0  char[8]  magic "CLAWSLB1"
//   8  uint32   dim
//   12 uint32   nx
//   16 uint64   number of levels L
//   24 float64  dx
//   32 float64  origin (lower corner, same on every axis)
//   40 float64  bound_M
//   48 L records of: float64 time, nx^dim float64 values (x fastest)
void write_slab(const GridField& field, const std::string& path);
GridField read_slab(const std::string& path);

// Dispatches on the extension: ".csv" or ".slab".
GridField read_field(const std::string& path);

}  // namespace claw

#endif  // CLAW_FIELD_IO_HPP_
