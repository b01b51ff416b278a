#ifndef CLAW_MOLLIFIER_HPP_
#define CLAW_MOLLIFIER_HPP_

#include <functional>

#include "claw/point.hpp"

namespace claw {

// C such that C exp(1/(|x|^2-1)) has unit mass on the unit ball of R^dim.
// Computed once per dimension by adaptive quadrature.
double kernel_constant(int dim);

// The d-dimensional standard mollifier rho_eps(x) = eps^-d rho(x/eps).
struct Mollifier {
  int dim = 1;
  double epsilon = 1.0;
  double normalization = 0.0;

  Mollifier(int dim, double epsilon);

  double operator()(const Point& x) const;
  Point gradient(const Point& x) const;
  double sup() const;
  // Mass of rho_eps computed by quadrature over its support ball.
  double integral() const;
};

// 1-d kernel omega_h and its derivative.
double omega(double h, double s);
double omega_prime(double h, double s);
double omega_sup(double h);

// alpha_h(sigma) = int_{-inf}^{sigma} omega_h(s) ds from a precomputed
// table with monotone cubic interpolation; exactly 0 for sigma <= -h and 1
// for sigma >= h.
double alpha(double h, double sigma);
// Same quantity by direct adaptive quadrature.
double alpha_direct(double h, double sigma);

// Truncated cone {(x,t) : |x - center| < R - tN, 0 < t < t_max}.
struct ConeSpec {
  int dim = 1;
  Point center{};
  double R = 1.0;
  double N = 0.0;
  double t_max = 0.0;  // R/N, or the experiment horizon when N == 0

  double ball_radius(double t) const { return R - t * N; }
  bool contains(const Point& x, double t) const;
};

ConeSpec make_cone(int dim, double R, double N, double horizon, Point center = {});

// 1 - alpha_eps(|x - c| - [R - tN] + eps).
double chi_epsilon(const ConeSpec& cone, double eps, const Point& x, double t);

struct SupportBox {
  int dim = 1;
  Point lo{};
  Point hi{};
  double t_lo = 0.0;
  double t_hi = 0.0;

  bool contains(const Point& x, double t) const;
};

// A non-negative compactly supported Lipschitz test function with closed-form
// derivatives. lipschitz is an upper bound on |(dt, grad_x)|.
struct TestFunction {
  std::function<double(const Point&, double)> value;
  std::function<double(const Point&, double)> dt;
  std::function<Point(const Point&, double)> grad_x;
  SupportBox support;
  double lipschitz = 0.0;
};

// psi(x,t) = (alpha_h(t - rho) - alpha_h(t - tau)) chi_eps(x,t).
// Throws BadWindow unless 0 < rho < tau < t_max and h < min(rho, t_max - tau).
TestFunction contraction_test_function(const ConeSpec& cone, double rho, double tau, double h,
                                       double eps);

// Smooth bump b(|x-c|/r) b((t-tc)/rt) with b(z) = exp(1 - 1/(1-z^2)).
TestFunction bump_test_function(int dim, const Point& center, double radius, double t_center,
                                double t_radius);

struct KernelValue {
  double value = 0.0;
  Point grad_y{};
};

// omega_eps(t - s) rho_eps(x - y) and its gradient in y.
KernelValue doubling_kernel(int dim, double eps, const Point& x, double t, const Point& y, double s);

}  // namespace claw

#endif  // CLAW_MOLLIFIER_HPP_
