#include "claw/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "claw/error.hpp"

namespace claw::quad {

namespace {

void build_rule(int n, double* nodes, double* weights) {
  for (int i = 0; i < n / 2; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    double p0 = 1.0, p1 = 0.0;
    for (int k = 2; k <= n; ++k) {
      const double p2 = (-(k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    // P_n'(0) = n P_{n-1}(0)
    const double dp = n * p0;
    nodes[n / 2] = 0.0;
    weights[n / 2] = 2.0 / (dp * dp);
  }
}

struct Adaptive {
  const std::function<double(double)>& f;
  double tol_density;  // tolerance per unit length
  int max_depth;

  double run(double a, double b, double whole, int depth) const {
    const double m = 0.5 * (a + b);
    const double left = gauss_panel(f, a, m);
    const double right = gauss_panel(f, m, b);
    const double refined = left + right;
    const double err = std::abs(refined - whole);
    const double local_tol = tol_density * std::abs(b - a);
    if (err <= local_tol || err <= 1e-15 * std::abs(refined)) return refined;
    if (depth >= max_depth) {
      std::ostringstream os;
      os << "panel [" << a << ", " << b << "] error " << err << " after depth " << depth;
      throw QuadratureNonConvergent(os.str());
    }
    return run(a, m, left, depth + 1) + run(m, b, right, depth + 1);
  }
};

}  // namespace

const GaussRule& gauss16() {
  static const GaussRule rule = [] {
    GaussRule r{};
    build_rule(kOrder, r.nodes.data(), r.weights.data());
    return r;
  }();
  return rule;
}

std::vector<std::pair<double, double>> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  std::vector<double> x(n), w(n);
  build_rule(n, x.data(), w.data());
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < n; ++i) out.emplace_back(x[i], w[i]);
  return out;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b) {
  const GaussRule& rule = gauss16();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (int i = 0; i < kOrder; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 AdaptiveOptions opts) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, opts);
  const Adaptive adaptive{f, opts.abs_tol / (b - a), opts.max_depth};
  return adaptive.run(a, b, gauss_panel(f, a, b), 0);
}

}  // namespace claw::quad
