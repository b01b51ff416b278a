#include "claw/mollifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "claw/error.hpp"
#include "claw/quadrature.hpp"

namespace claw {

namespace {

double raw_kernel(double r2) { return r2 < 1.0 ? std::exp(1.0 / (r2 - 1.0)) : 0.0; }

double compute_constant(int dim) {
  const quad::AdaptiveOptions tight{1e-15, 40};
  if (dim == 1) return 1.0 / quad::integrate([](double x) { return raw_kernel(x * x); }, -1.0, 1.0, tight);
  if (dim == 2) {
    const double radial =
        quad::integrate([](double r) { return r * raw_kernel(r * r); }, 0.0, 1.0, tight);
    return 1.0 / (2.0 * std::numbers::pi * radial);
  }
  throw Error("mollifier dimension must be 1 or 2");
}

// Normalized cumulative kernel on [-1, 1]: A(s) = int_{-1}^{s} C1 exp(1/(w^2-1)) dw.
class AlphaTable {
 public:
  static constexpr int kIntervals = 10000;

  AlphaTable() : nodes_(kIntervals + 1), values_(kIntervals + 1), slopes_(kIntervals + 1) {
    const double c = kernel_constant(1);
    auto density = [c](double s) { return c * raw_kernel(s * s); };
    double acc = 0.0;
    for (int j = 0; j <= kIntervals; ++j) {
      nodes_[j] = -1.0 + 2.0 * j / kIntervals;
      if (j > 0) acc += quad::gauss_panel(density, nodes_[j - 1], nodes_[j]);
      values_[j] = acc;
      slopes_[j] = density(nodes_[j]);
    }
    // Fritsch-Carlson limiter on the exact nodal derivatives.
    for (int j = 0; j < kIntervals; ++j) {
      const double delta = (values_[j + 1] - values_[j]) / step();
      if (delta <= 0.0) {
        slopes_[j] = slopes_[j + 1] = 0.0;
        continue;
      }
      const double a = slopes_[j] / delta;
      const double b = slopes_[j + 1] / delta;
      const double s = a * a + b * b;
      if (s > 9.0) {
        const double t = 3.0 / std::sqrt(s);
        slopes_[j] = t * a * delta;
        slopes_[j + 1] = t * b * delta;
      }
    }
  }

  double operator()(double s) const {
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double pos = (s + 1.0) / step();
    const int j = std::min(kIntervals - 1, static_cast<int>(pos));
    const double t = pos - j;
    const double h = step();
    const double t2 = t * t, t3 = t2 * t;
    const double v = (2 * t3 - 3 * t2 + 1) * values_[j] + (t3 - 2 * t2 + t) * h * slopes_[j] +
                     (-2 * t3 + 3 * t2) * values_[j + 1] + (t3 - t2) * h * slopes_[j + 1];
    return std::clamp(v, 0.0, 1.0);
  }

 private:
  static constexpr double step() { return 2.0 / kIntervals; }
  std::vector<double> nodes_, values_, slopes_;
};

const AlphaTable& alpha_table() {
  static const AlphaTable table;
  return table;
}

double bump(double z) { return std::abs(z) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0; }
double bump_prime(double z) {
  if (std::abs(z) >= 1.0) return 0.0;
  const double w = 1.0 - z * z;
  return bump(z) * (-2.0 * z / (w * w));
}
double bump_prime_sup() {
  static const double sup = [] {
    double m = 0.0;
    for (int i = 0; i <= 100000; ++i) m = std::max(m, std::abs(bump_prime(-1.0 + 2.0 * i / 100000)));
    return 1.01 * m;
  }();
  return sup;
}

}  // namespace

double kernel_constant(int dim) {
  static const std::array<double, 2> constants = {compute_constant(1), compute_constant(2)};
  if (dim < 1 || dim > 2) throw Error("mollifier dimension must be 1 or 2");
  return constants[dim - 1];
}

Mollifier::Mollifier(int d, double eps) : dim(d), epsilon(eps), normalization(kernel_constant(d)) {
  if (!(eps > 0.0)) throw Error("mollifier scale must be positive");
}

double Mollifier::operator()(const Point& x) const {
  const double r2 = dot(x, x) / (epsilon * epsilon);
  return normalization * raw_kernel(r2) / std::pow(epsilon, dim);
}

Point Mollifier::gradient(const Point& x) const {
  const Point z = (1.0 / epsilon) * x;
  const double r2 = dot(z, z);
  if (r2 >= 1.0) return Point{};
  const double w = r2 - 1.0;
  const double scale = normalization * raw_kernel(r2) * (-2.0 / (w * w)) / std::pow(epsilon, dim + 1);
  return scale * z;
}

double Mollifier::sup() const { return normalization * std::exp(-1.0) / std::pow(epsilon, dim); }

double Mollifier::integral() const {
  const quad::AdaptiveOptions tight{1e-13, 40};
  if (dim == 1)
    return quad::integrate([this](double x) { return (*this)(Point{x, 0.0}); }, -epsilon, epsilon, tight);
  // Iterated integral over the disk in Cartesian coordinates.
  return quad::integrate(
      [this, tight](double x) {
        const double half = std::sqrt(std::max(0.0, epsilon * epsilon - x * x));
        if (half == 0.0) return 0.0;
        return quad::integrate([this, x](double y) { return (*this)(Point{x, y}); }, -half, half, tight);
      },
      -epsilon, epsilon, tight);
}

double omega(double h, double s) {
  const double z = s / h;
  return kernel_constant(1) * raw_kernel(z * z) / h;
}

double omega_prime(double h, double s) {
  const double z = s / h;
  const double r2 = z * z;
  if (r2 >= 1.0) return 0.0;
  const double w = r2 - 1.0;
  return kernel_constant(1) * raw_kernel(r2) * (-2.0 * z / (w * w)) / (h * h);
}

double omega_sup(double h) { return kernel_constant(1) * std::exp(-1.0) / h; }

double alpha(double h, double sigma) { return alpha_table()(sigma / h); }

double alpha_direct(double h, double sigma) {
  if (sigma <= -h) return 0.0;
  if (sigma >= h) return 1.0;
  return quad::integrate([h](double s) { return omega(h, s); }, -h, sigma, {1e-14, 40});
}

bool ConeSpec::contains(const Point& x, double t) const {
  return t > 0.0 && t < t_max && norm(x - center) < ball_radius(t);
}

ConeSpec make_cone(int dim, double R, double N, double horizon, Point center) {
  if (!(R > 0.0) || !(N >= 0.0)) throw Error("cone needs R > 0 and N >= 0");
  ConeSpec c;
  c.dim = dim;
  c.center = center;
  c.R = R;
  c.N = N;
  c.t_max = N > 0.0 ? std::min(R / N, horizon) : horizon;
  return c;
}

double chi_epsilon(const ConeSpec& cone, double eps, const Point& x, double t) {
  return 1.0 - alpha(eps, norm(x - cone.center) - cone.ball_radius(t) + eps);
}

bool SupportBox::contains(const Point& x, double t) const {
  if (t < t_lo || t > t_hi) return false;
  for (int i = 0; i < dim; ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

TestFunction contraction_test_function(const ConeSpec& cone, double rho, double tau, double h,
                                       double eps) {
  if (!(0.0 < rho && rho < tau && tau < cone.t_max)) {
    std::ostringstream os;
    os << "need 0 < rho < tau < t_max, got rho=" << rho << " tau=" << tau << " t_max=" << cone.t_max;
    throw BadWindow(os.str());
  }
  if (!(h > 0.0) || h >= std::min(rho, cone.t_max - tau)) {
    std::ostringstream os;
    os << "h=" << h << " must lie in (0, min(rho, t_max - tau))";
    throw BadWindow(os.str());
  }
  if (!(eps > 0.0)) throw BadWindow("eps must be positive");

  auto time_window = [=](double t) { return alpha(h, t - rho) - alpha(h, t - tau); };
  auto radial_arg = [=](const Point& x, double t) {
    return norm(x - cone.center) - cone.ball_radius(t) + eps;
  };

  TestFunction psi;
  psi.value = [=](const Point& x, double t) { return time_window(t) * chi_epsilon(cone, eps, x, t); };
  psi.dt = [=](const Point& x, double t) {
    const double chi = chi_epsilon(cone, eps, x, t);
    return (omega(h, t - rho) - omega(h, t - tau)) * chi -
           time_window(t) * omega(eps, radial_arg(x, t)) * cone.N;
  };
  psi.grad_x = [=](const Point& x, double t) {
    const Point rel = x - cone.center;
    const double r = norm(rel);
    // grad |x| is undefined at the center; the kernel factor vanishes there.
    if (r == 0.0) return Point{};
    return (-time_window(t) * omega(eps, radial_arg(x, t)) / r) * rel;
  };
  psi.support.dim = cone.dim;
  for (int i = 0; i < cone.dim; ++i) {
    psi.support.lo[i] = cone.center[i] - cone.R;
    psi.support.hi[i] = cone.center[i] + cone.R;
  }
  psi.support.t_lo = rho - h;
  psi.support.t_hi = tau + h;
  const double grad_bound = 2.0 * omega_sup(eps);
  const double time_bound = 2.0 * omega_sup(h) + 2.0 * cone.N * omega_sup(eps);
  psi.lipschitz = std::hypot(grad_bound, time_bound);
  return psi;
}

TestFunction bump_test_function(int dim, const Point& center, double radius, double t_center,
                                double t_radius) {
  if (!(radius > 0.0) || !(t_radius > 0.0)) throw Error("bump radii must be positive");
  TestFunction phi;
  phi.value = [=](const Point& x, double t) {
    return bump(norm(x - center) / radius) * bump((t - t_center) / t_radius);
  };
  phi.dt = [=](const Point& x, double t) {
    return bump(norm(x - center) / radius) * bump_prime((t - t_center) / t_radius) / t_radius;
  };
  phi.grad_x = [=](const Point& x, double t) {
    const Point rel = x - center;
    const double r = norm(rel);
    if (r == 0.0) return Point{};
    const double g = bump_prime(r / radius) / radius * bump((t - t_center) / t_radius);
    return (g / r) * rel;
  };
  phi.support.dim = dim;
  for (int i = 0; i < dim; ++i) {
    phi.support.lo[i] = center[i] - radius;
    phi.support.hi[i] = center[i] + radius;
  }
  phi.support.t_lo = t_center - t_radius;
  phi.support.t_hi = t_center + t_radius;
  phi.lipschitz = bump_prime_sup() * std::hypot(1.0 / radius, 1.0 / t_radius);
  return phi;
}

KernelValue doubling_kernel(int dim, double eps, const Point& x, double t, const Point& y, double s) {
  const Mollifier rho(dim, eps);
  const double w = omega(eps, t - s);
  KernelValue k;
  k.value = w * rho(x - y);
  // d/dy rho(x - y) = -(grad rho)(x - y)
  k.grad_y = (-w) * rho.gradient(x - y);
  return k;
}

}  // namespace claw
