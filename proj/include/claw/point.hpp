#ifndef CLAW_POINT_HPP_
#define CLAW_POINT_HPP_

#include <array>
#include <cmath>

namespace claw {

// Points and flux vectors live in R^d with d <= 2. Unused trailing
// components are kept at zero so that dot products and norms need no
// dimension argument.
using Point = std::array<double, 2>;

inline constexpr int kMaxDim = 2;

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Point& a) { return std::hypot(a[0], a[1]); }
inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1]}; }

// sign(0) := 0.
inline double sign(double v) { return (v > 0.0) - (v < 0.0); }

inline Point unit(int axis) {
  Point e{};
  e[axis] = 1.0;
  return e;
}

}  // namespace claw

#endif  // CLAW_POINT_HPP_
