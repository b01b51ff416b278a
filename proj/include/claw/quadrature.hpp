#ifndef CLAW_QUADRATURE_HPP_
#define CLAW_QUADRATURE_HPP_

#include <array>
#include <functional>
#include <utility>
#include <vector>

namespace claw::quad {

inline constexpr int kOrder = 16;

// Nodes and weights of the 16-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::array<double, kOrder> nodes;
  std::array<double, kOrder> weights;
};

const GaussRule& gauss16();

// (node, weight) pairs of the n-point Gauss-Legendre rule on [-1, 1].
std::vector<std::pair<double, double>> gauss_legendre(int n);

// One fixed 16-point panel on [a, b].
double gauss_panel(const std::function<double(double)>& f, double a, double b);

struct AdaptiveOptions {
  double abs_tol = 1e-10;
  int max_depth = 30;
};

// Adaptive composite Gauss-Legendre with interval bisection. The result is
// signed: integrate(f, a, b) == -integrate(f, b, a). Throws
// QuadratureNonConvergent when a panel cannot be resolved within max_depth.
double integrate(const std::function<double(double)>& f, double a, double b,
                 AdaptiveOptions opts = {});

}  // namespace claw::quad

#endif  // CLAW_QUADRATURE_HPP_
