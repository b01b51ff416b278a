#include "claw/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "claw/error.hpp"

namespace claw {

namespace {

double product_g(double x) { return std::atan(x * x) + 1.0; }
double product_dg(double x) { return 2.0 * x / (1.0 + x * x * x * x); }

Point zero_grad(const Point&, double, int) { return Point{}; }

FluxSpec make_burgers1d(const std::map<std::string, double>&) {
  FluxSpec f;
  f.dim = 1;
  f.homogeneous = true;
  f.eval = [](const Point&, double k) { return Point{0.5 * k * k, 0.0}; };
  f.dk = [](const Point&, double k) { return Point{k, 0.0}; };
  f.div_x = [](const Point&, double) { return 0.0; };
  f.grad_x = zero_grad;
  f.lipschitz_bound = [](double, double m) { return m; };
  return f;
}

FluxSpec make_burgers2d(const std::map<std::string, double>&) {
  FluxSpec f;
  f.dim = 2;
  f.homogeneous = true;
  f.eval = [](const Point&, double k) { return Point{0.5 * k * k, 0.5 * k * k}; };
  f.dk = [](const Point&, double k) { return Point{k, k}; };
  f.div_x = [](const Point&, double) { return 0.0; };
  f.grad_x = zero_grad;
  f.lipschitz_bound = [](double, double m) { return std::numbers::sqrt2 * m; };
  return f;
}

FluxSpec make_linear1d(const std::map<std::string, double>& p) {
  const double c = p.at("c");
  FluxSpec f;
  f.dim = 1;
  f.homogeneous = true;
  f.eval = [c](const Point&, double k) { return Point{c * k, 0.0}; };
  f.dk = [c](const Point&, double) { return Point{c, 0.0}; };
  f.div_x = [](const Point&, double) { return 0.0; };
  f.grad_x = zero_grad;
  f.lipschitz_bound = [c](double, double) { return std::abs(c); };
  return f;
}

FluxSpec make_linear2d(const std::map<std::string, double>& p) {
  const double c1 = p.at("c1");
  const double c2 = p.at("c2");
  FluxSpec f;
  f.dim = 2;
  f.homogeneous = true;
  f.eval = [c1, c2](const Point&, double k) { return Point{c1 * k, c2 * k}; };
  f.dk = [c1, c2](const Point&, double) { return Point{c1, c2}; };
  f.div_x = [](const Point&, double) { return 0.0; };
  f.grad_x = zero_grad;
  f.lipschitz_bound = [c1, c2](double, double) { return std::hypot(c1, c2); };
  return f;
}

FluxSpec make_xsquared1d(const std::map<std::string, double>&) {
  FluxSpec f;
  f.dim = 1;
  f.eval = [](const Point& x, double) { return Point{x[0] * x[0], 0.0}; };
  f.dk = [](const Point&, double) { return Point{}; };
  f.div_x = [](const Point& x, double) { return 2.0 * x[0]; };
  f.grad_x = [](const Point& x, double, int) { return Point{2.0 * x[0], 0.0}; };
  f.lipschitz_bound = [](double, double) { return 0.0; };
  return f;
}

FluxSpec make_product1d(const std::map<std::string, double>&) {
  FluxSpec f;
  f.dim = 1;
  f.eval = [](const Point& x, double k) { return Point{product_g(x[0]) * std::sin(k), 0.0}; };
  f.dk = [](const Point& x, double k) { return Point{product_g(x[0]) * std::cos(k), 0.0}; };
  f.div_x = [](const Point& x, double k) { return product_dg(x[0]) * std::sin(k); };
  f.grad_x = [](const Point& x, double k, int) {
    return Point{product_dg(x[0]) * std::sin(k), 0.0};
  };
  // g is even and increasing in |x|; |cos| peaks at k = 0 which lies in [-M, M].
  f.lipschitz_bound = [](double r, double) { return product_g(r); };
  return f;
}

FluxSpec make_product2d(const std::map<std::string, double>&) {
  FluxSpec f;
  f.dim = 2;
  f.eval = [](const Point& x, double k) {
    const double s = std::sin(k);
    return Point{product_g(x[0]) * s, product_g(x[1]) * s};
  };
  f.dk = [](const Point& x, double k) {
    const double c = std::cos(k);
    return Point{product_g(x[0]) * c, product_g(x[1]) * c};
  };
  f.div_x = [](const Point& x, double k) {
    return (product_dg(x[0]) + product_dg(x[1])) * std::sin(k);
  };
  f.grad_x = [](const Point& x, double k, int i) {
    Point g{};
    g[i] = product_dg(x[i]) * std::sin(k);
    return g;
  };
  // |sin k - sin k'| <= |k - k'| is sharp near 0, so the constant is the sup
  // of |(g(x1), g(x2))| over the disc, attained on the circle x1^2 + x2^2 = R^2.
  f.lipschitz_bound = [](double r, double) {
    const double s = r * r;
    const auto norm2 = [s](double a) {
      a = std::clamp(a, 0.0, s);
      const double g1 = product_g(std::sqrt(a)), g2 = product_g(std::sqrt(s - a));
      return g1 * g1 + g2 * g2;
    };
    constexpr int n = 256;
    int best = 0;
    for (int i = 1; i <= n; ++i)
      if (norm2(s * i / n) > norm2(s * best / n)) best = i;
    const double lo = s * std::max(best - 1, 0) / n, hi = s * std::min(best + 1, n) / n;
    const auto [a, neg] = boost::math::tools::brent_find_minima([&](double a) { return -norm2(a); }, lo, hi, 52);
    return std::sqrt(std::max(-neg, norm2(s * best / n)));
  };
  return f;
}

FluxSpec make_kinkx1d(const std::map<std::string, double>&) {
  FluxSpec f;
  f.dim = 1;
  f.eval = [](const Point& x, double k) { return Point{(1.0 + std::abs(x[0])) * 0.5 * k * k, 0.0}; };
  f.dk = [](const Point& x, double k) { return Point{(1.0 + std::abs(x[0])) * k, 0.0}; };
  f.div_x = [](const Point& x, double k) { return sign(x[0]) * 0.5 * k * k; };
  f.grad_x = [](const Point& x, double k, int) { return Point{sign(x[0]) * 0.5 * k * k, 0.0}; };
  f.singular_points = {Point{0.0, 0.0}};
  f.lipschitz_bound = [](double r, double m) { return (1.0 + r) * m; };
  return f;
}

struct Registered {
  CatalogEntry entry;
  FluxSpec (*make)(const std::map<std::string, double>&);
};

const std::vector<Registered>& registry() {
  static const std::vector<Registered> reg = {
      {{"burgers1d", 1, "f(x,k) = k^2/2", {}}, make_burgers1d},
      {{"burgers2d", 2, "f(x,k) = (k^2/2, k^2/2)", {}}, make_burgers2d},
      {{"linear1d", 1, "f(x,k) = c k", {{"c", 1.0}}}, make_linear1d},
      {{"linear2d", 2, "f(x,k) = (c1 k, c2 k)", {{"c1", 1.0}, {"c2", 0.5}}}, make_linear2d},
      {{"xsquared1d", 1, "f(x,k) = x^2", {}}, make_xsquared1d},
      {{"product1d", 1, "f(x,k) = (atan(x^2)+1) sin(k)", {}}, make_product1d},
      {{"product2d", 2, "f_i(x,k) = (atan(x_i^2)+1) sin(k)", {}}, make_product2d},
      {{"kinkx1d", 1, "f(x,k) = (1+|x|) k^2/2, singular at x = 0", {}}, make_kinkx1d},
  };
  return reg;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = 0.5 * (lo + hi);
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

// Deterministic sample of the closed ball B_r(0) in R^dim.
std::vector<Point> ball_samples(int dim, double r, int n) {
  std::vector<Point> xs;
  if (dim == 1) {
    for (double x : linspace(-r, r, n)) xs.push_back({x, 0.0});
    return xs;
  }
  const int m = std::max(8, n / 4);
  for (double a : linspace(-r, r, m))
    for (double b : linspace(-r, r, m))
      if (a * a + b * b <= r * r) xs.push_back({a, b});
  for (int i = 0; i < 4 * m; ++i) {
    const double th = 2.0 * std::numbers::pi * i / (4 * m);
    xs.push_back({r * std::cos(th), r * std::sin(th)});
  }
  return xs;
}

void require_finite(const Point& v, const FluxSpec& flux, const Point& x, double k) {
  if (!std::isfinite(v[0]) || !std::isfinite(v[1])) {
    std::ostringstream os;
    os << flux.name << " at x=(" << x[0] << "," << x[1] << "), k=" << k;
    throw NonFiniteFlux(os.str());
  }
}

}  // namespace

bool FluxSpec::is_singular(const Point& x, double tol) const {
  return std::any_of(singular_points.begin(), singular_points.end(),
                     [&](const Point& s) { return norm(x - s) <= tol; });
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> e;
    for (const auto& r : registry()) e.push_back(r.entry);
    return e;
  }();
  return entries;
}

FluxSpec catalog_lookup(const std::string& name, const std::map<std::string, double>& params) {
  for (const auto& r : registry()) {
    if (r.entry.name != name) continue;
    std::map<std::string, double> merged = r.entry.default_params;
    for (const auto& [key, value] : params) {
      if (!merged.contains(key)) throw ConfigError("flux " + name + ": unknown parameter key '" + key + "'");
      merged[key] = value;
    }
    FluxSpec f = r.make(merged);
    f.name = name;
    f.params = merged;
    return f;
  }
  throw UnknownFlux(name);
}

Point avoid_singular(const FluxSpec& flux, Point x) {
  for (const Point& s : flux.singular_points) {
    if (norm(x - s) <= 1e-14) {
      const double jitter = 1e-12 * std::max(1.0, norm(s));
      x[0] += jitter;
    }
  }
  return x;
}

double sampled_lipschitz(const FluxSpec& flux, double radius, double state_bound, int grid) {
  const std::vector<Point> xs = ball_samples(flux.dim, radius, grid);
  const std::vector<double> ks = linspace(-state_bound, state_bound, grid);
  std::vector<Point> values(ks.size());
  double best = 0.0;
  for (const Point& x : xs) {
    for (std::size_t j = 0; j < ks.size(); ++j) {
      values[j] = flux.eval(x, ks[j]);
      require_finite(values[j], flux, x, ks[j]);
      const Point d = flux.dk(x, ks[j]);
      require_finite(d, flux, x, ks[j]);
      best = std::max(best, norm(d));
    }
    // Any quotient over [k_j, k_l] is bounded by the largest adjacent one.
    for (std::size_t j = 0; j + 1 < ks.size(); ++j)
      best = std::max(best, norm(values[j + 1] - values[j]) / std::abs(ks[j + 1] - ks[j]));
  }
  return best;
}

double lipschitz_constant(const FluxSpec& flux, double radius, double state_bound,
                          LipschitzOptions opts) {
  if (!(radius > 0.0) || !(state_bound >= 0.0))
    throw Error("lipschitz_constant needs R > 0 and M >= 0");
  int grid = opts.initial_grid;
  double previous = sampled_lipschitz(flux, radius, state_bound, grid);
  double current = previous;
  for (int i = 0; i < opts.max_doublings; ++i) {
    grid *= 2;
    current = sampled_lipschitz(flux, radius, state_bound, grid);
    const double scale = std::max(std::abs(current), std::abs(previous));
    if (scale == 0.0 || std::abs(current - previous) <= opts.agreement * scale) break;
    previous = current;
  }
  const double sampled = std::max(previous, current);
  if (opts.use_analytic && flux.lipschitz_bound) {
    const double analytic = flux.lipschitz_bound(radius, state_bound);
    if (analytic < sampled * (1.0 - 1e-9) - 1e-12) {
      std::ostringstream os;
      os << flux.name << ": closed-form Lipschitz bound " << analytic
         << " is below the sampled quotient " << sampled;
      throw Error(os.str());
    }
    return analytic;
  }
  return sampled * (1.0 + opts.agreement);
}

std::vector<double> uniform_diffquot_deficit(const FluxSpec& flux, const Point& x, double k_lo,
                                             double k_hi, const std::vector<double>& radii) {
  if (flux.is_singular(x)) throw SingularPoint("x is a declared singular point of " + flux.name);
  std::vector<Point> dirs;
  if (flux.dim == 1) {
    dirs = {{1.0, 0.0}, {-1.0, 0.0}};
  } else {
    for (int i = 0; i < 16; ++i) {
      const double th = 2.0 * std::numbers::pi * i / 16;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  }
  const int nk = std::max(2, 1000 / static_cast<int>(dirs.size()));
  const std::vector<double> ks = linspace(k_lo, k_hi, nk);
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    double worst = 0.0;
    for (double k : ks) {
      const Point fx = flux.eval(x, k);
      Point jac_rows[kMaxDim];
      for (int i = 0; i < flux.dim; ++i) jac_rows[i] = flux.grad_x(x, k, i);
      for (const Point& e : dirs) {
        const Point step = r * e;
        const Point fy = flux.eval(x + step, k);
        Point rem{};
        for (int i = 0; i < flux.dim; ++i) rem[i] = fy[i] - fx[i] - dot(jac_rows[i], step);
        worst = std::max(worst, norm(rem) / r);
      }
    }
    out.push_back(worst);
  }
  return out;
}

FluxBounds sample_flux_bounds(const FluxSpec& flux, const std::vector<Point>& xs, double state_bound) {
  const std::vector<double> ks = linspace(-state_bound, state_bound, state_bound > 0 ? 129 : 1);
  FluxBounds b;
  for (const Point& raw : xs) {
    const Point x = avoid_singular(flux, raw);
    for (double k : ks) {
      const Point d = flux.dk(x, k);
      require_finite(d, flux, x, k);
      b.max_speed = std::max({b.max_speed, std::abs(d[0]), std::abs(d[1])});
      const double dv = flux.div_x(x, k);
      if (!std::isfinite(dv)) throw NonFiniteFlux(flux.name + " divergence");
      b.max_div = std::max(b.max_div, std::abs(dv));
    }
  }
  return b;
}

}  // namespace claw
