#include "claw/fv_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "claw/error.hpp"
#include "claw/field_io.hpp"

namespace claw {

namespace {

double overlap(double a, double b, double lo, double hi) {
  return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

double sine_average(double freq, double a, double b) {
  const double w = 2.0 * std::numbers::pi * freq;
  return (std::cos(w * a) - std::cos(w * b)) / (w * (b - a));
}

// Gauss-Legendre 4-point average of fn over a cell.
double gauss_cell_average(const Grid& g, std::size_t index, const std::function<double(const Point&)>& fn) {
  static constexpr double nodes[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                      0.8611363115940526};
  static constexpr double weights[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                        0.3478548451374538};
  const Point c = g.center(index);
  const double half = 0.5 * g.dx();
  double sum = 0.0;
  if (g.dim == 1) {
    for (int a = 0; a < 4; ++a) sum += weights[a] * fn({c[0] + half * nodes[a], 0.0});
    return 0.5 * sum;
  }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      sum += weights[a] * weights[b] * fn({c[0] + half * nodes[a], c[1] + half * nodes[b]});
  return 0.25 * sum;
}

// Interface points of the grid, used to bound wave speeds and sources.
std::vector<Point> face_points(const Grid& g) {
  std::vector<Point> xs;
  const double dx = g.dx();
  if (g.dim == 1) {
    for (int i = 0; i <= g.nx; ++i) xs.push_back({g.lo + i * dx, 0.0});
    return xs;
  }
  for (int j = 0; j < g.nx; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      xs.push_back({g.lo + i * dx, g.coord(j)});
      xs.push_back({g.coord(j), g.lo + i * dx});
    }
  return xs;
}

double godunov_burgers_flux(double a, double b) {
  if (a <= b) {
    if (a > 0.0) return 0.5 * a * a;
    if (b < 0.0) return 0.5 * b * b;
    return 0.0;
  }
  return std::max(0.5 * a * a, 0.5 * b * b);
}

class Stepper {
 public:
  Stepper(const FluxSpec& flux, const SchemeConfig& cfg) : flux_(flux), cfg_(cfg), grid_(cfg.grid) {
    line_.resize(grid_.nx + 2);
    faces_.resize(grid_.nx + 1);
  }

  void step(std::vector<double>& u, double dt) {
    for (int axis = 0; axis < grid_.dim; ++axis) {
      const int lines = grid_.dim == 1 ? 1 : grid_.nx;
      for (int l = 0; l < lines; ++l) sweep(u, dt, axis, l);
    }
  }

 private:
  std::size_t index(int axis, int line, int i) const {
    if (grid_.dim == 1) return i;
    return axis == 0 ? std::size_t(line) * grid_.nx + i : std::size_t(i) * grid_.nx + line;
  }

  void sweep(std::vector<double>& u, double dt, int axis, int l) {
    const int nx = grid_.nx;
    const double dx = grid_.dx();
    for (int i = 0; i < nx; ++i) line_[i + 1] = u[index(axis, l, i)];
    if (cfg_.boundary == Boundary::periodic) {
      line_[0] = line_[nx];
      line_[nx + 1] = line_[1];
    } else {
      line_[0] = line_[1];
      line_[nx + 1] = line_[nx];
    }
    Point face{};
    if (grid_.dim == 2) face[1 - axis] = grid_.coord(l);
    for (int f = 0; f <= nx; ++f) {
      face[axis] = grid_.lo + f * dx;
      faces_[f] = numerical_flux(flux_, cfg_, face, axis, line_[f], line_[f + 1]);
    }
    const double ratio = dt / dx;
    for (int i = 0; i < nx; ++i) u[index(axis, l, i)] -= ratio * (faces_[i + 1] - faces_[i]);
  }

  const FluxSpec& flux_;
  const SchemeConfig& cfg_;
  const Grid& grid_;
  std::vector<double> line_;
  std::vector<double> faces_;
};

}  // namespace

SchemeConfig SchemeConfig::refined() const {
  SchemeConfig c = *this;
  c.grid = grid.refined();
  c.store_every = store_every == 1 ? 1 : store_every * 2;
  return c;
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::rusanov: return "rusanov";
    case Scheme::godunov_burgers: return "godunov_burgers";
    case Scheme::viscous: return "viscous";
  }
  return "?";
}

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "outflow"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "rusanov") return Scheme::rusanov;
  if (s == "godunov_burgers") return Scheme::godunov_burgers;
  if (s == "viscous") return Scheme::viscous;
  throw ConfigError("unknown scheme '" + s + "'");
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "outflow") return Boundary::outflow;
  throw ConfigError("unknown boundary '" + s + "'");
}

std::vector<double> cell_averages(const Grid& g, const InitialData& u0) {
  std::vector<double> out(g.cells());
  const double dx = g.dx();
  for (std::size_t c = 0; c < out.size(); ++c) {
    const Point x = g.center(c);
    const double a0 = x[0] - 0.5 * dx, b0 = x[0] + 0.5 * dx;
    const double a1 = x[1] - 0.5 * dx, b1 = x[1] + 0.5 * dx;
    out[c] = std::visit(
        [&](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, data::Constant>) {
            return d.value;
          } else if constexpr (std::is_same_v<T, data::Riemann>) {
            return riemann_cell_average(d.left, d.right, d.x0, a0, b0, 0.0);
          } else if constexpr (std::is_same_v<T, data::Box>) {
            double frac = overlap(a0, b0, d.lo, d.hi) / dx;
            if (g.dim == 2) frac *= overlap(a1, b1, d.lo, d.hi) / dx;
            return d.base + (d.height - d.base) * frac;
          } else if constexpr (std::is_same_v<T, data::Sine>) {
            double v = sine_average(d.freq, a0, b0);
            if (g.dim == 2) v *= sine_average(d.freq, a1, b1);
            return d.offset + d.amp * v;
          } else if constexpr (std::is_same_v<T, data::Function>) {
            return gauss_cell_average(g, c, d.fn);
          } else {
            return std::numeric_limits<double>::quiet_NaN();
          }
        },
        u0);
  }
  if (const auto* file = std::get_if<data::File>(&u0)) {
    const GridField loaded = read_field(file->path);
    if (!loaded.grid.same_as(g)) throw GridMismatch("initial data file " + file->path + " has a different grid");
    out = loaded.data.front();
  }
  return out;
}

StepPlan plan_steps(const FluxSpec& flux, const std::vector<double>& u0_cells, const SchemeConfig& cfg) {
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw CFLViolation("cfl must lie in (0, 1]");
  if (flux.dim != cfg.grid.dim) throw ConfigError("flux dimension does not match the grid");
  const Grid& g = cfg.grid;
  const std::vector<Point> faces = face_points(g);
  double m0 = cfg.state_bound;
  for (double v : u0_cells) m0 = std::max(m0, std::abs(v));
  StepPlan plan;
  const double source = flux.homogeneous ? 0.0 : sample_flux_bounds(flux, faces, m0).max_div;
  plan.state_bound = m0 + cfg.t_end * source;
  if (!flux.homogeneous) plan.state_bound = m0 + cfg.t_end * sample_flux_bounds(flux, faces, plan.state_bound).max_div;
  plan.max_speed = sample_flux_bounds(flux, faces, plan.state_bound).max_speed;
  plan.blowup_limit = 10.0 * plan.state_bound;

  const double dx = g.dx();
  // Speed-free fluxes get the time step of a unit wave speed.
  const double speed = plan.max_speed > 0.0 ? plan.max_speed : 1.0;
  double rate = speed;
  // Monotone iff dt (lambda + 2 eps / dx) <= dx per sweep.
  if (cfg.scheme == Scheme::viscous) rate += 2.0 * cfg.effective_viscosity() / dx;
  const double dt = cfg.cfl * dx / (g.dim * rate);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    std::ostringstream os;
    os << "time step " << dt << " from speed " << plan.max_speed;
    throw CFLViolation(os.str());
  }
  plan.dt = dt;
  return plan;
}

double numerical_flux(const FluxSpec& flux, const SchemeConfig& cfg, const Point& face, int axis,
                      double left, double right) {
  if (cfg.scheme == Scheme::godunov_burgers) return godunov_burgers_flux(left, right);
  const double fl = flux.eval(face, left)[axis];
  const double fr = flux.eval(face, right)[axis];
  const double lambda = std::max(std::abs(flux.dk(face, left)[axis]), std::abs(flux.dk(face, right)[axis]));
  double value = 0.5 * (fl + fr) - 0.5 * lambda * (right - left);
  if (cfg.scheme == Scheme::viscous) value -= cfg.effective_viscosity() * (right - left) / cfg.grid.dx();
  return value;
}

GridField solve(const FluxSpec& flux, const InitialData& u0, const SchemeConfig& cfg) {
  if (cfg.scheme == Scheme::godunov_burgers && flux.name != "burgers1d" && flux.name != "burgers2d")
    throw ConfigError("godunov_burgers applies only to the Burgers fluxes, not " + flux.name);
  if (cfg.store_every < 1) throw ConfigError("store_every must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");

  std::vector<double> u = cell_averages(cfg.grid, u0);
  const StepPlan plan = plan_steps(flux, u, cfg);

  GridField field;
  field.grid = cfg.grid;
  field.times.push_back(0.0);
  field.data.push_back(u);
  double bound = 0.0;
  for (double v : u) bound = std::max(bound, std::abs(v));

  Stepper stepper(flux, cfg);
  double t = 0.0;
  long step = 0;
  while (t < cfg.t_end) {
    double dt = plan.dt;
    bool last = false;
    if (t + dt >= cfg.t_end * (1.0 - 1e-14)) {
      dt = cfg.t_end - t;
      last = true;
    }
    stepper.step(u, dt);
    ++step;
    t = last ? cfg.t_end : t + dt;
    for (double v : u) {
      if (!std::isfinite(v) || std::abs(v) > plan.blowup_limit) {
        std::ostringstream os;
        os << "cell value " << v << " at t=" << t << " exceeds " << plan.blowup_limit;
        throw BlowUp(os.str());
      }
      bound = std::max(bound, std::abs(v));
    }
    if (last || step % cfg.store_every == 0) {
      field.times.push_back(t);
      field.data.push_back(u);
    }
  }
  field.bound_M = bound;
  return field;
}

GridField solve_viscous(const FluxSpec& flux, const InitialData& u0, double eps, SchemeConfig config) {
  config.scheme = Scheme::viscous;
  config.viscosity = eps;
  config.viscosity_per_dx = false;
  return solve(flux, u0, config);
}

double exact_riemann_burgers(double left, double right, double x, double t) {
  if (left == right) return left;
  if (left > right) return x < 0.5 * (left + right) * t ? left : right;
  const double xi = x / t;
  return std::clamp(xi, left, right);
}

double riemann_cell_average(double left, double right, double x0, double a, double b, double t,
                            bool entropic) {
  const bool fan = entropic && left < right && t > 0.0;
  const double p1 = fan ? x0 + left * t : x0 + 0.5 * (left + right) * t;
  const double p2 = fan ? x0 + right * t : p1;
  constexpr double inf = std::numeric_limits<double>::infinity();
  double integral = left * overlap(a, b, -inf, p1) + right * overlap(a, b, p2, inf);
  if (fan) {
    const double lo = std::max(a, p1), hi = std::min(b, p2);
    // integral of (x - x0)/t over [lo, hi]
    if (hi > lo) integral += ((hi - x0) * (hi - x0) - (lo - x0) * (lo - x0)) / (2.0 * t);
  }
  return integral / (b - a);
}

GridField riemann_field(const Grid& grid, double left, double right, double x0,
                        const std::vector<double>& times, bool entropic) {
  GridField f;
  f.grid = grid;
  f.times = times;
  const double dx = grid.dx();
  for (double t : times) {
    std::vector<double> slab(grid.cells());
    for (std::size_t c = 0; c < slab.size(); ++c) {
      const double xc = grid.center(c)[0];
      slab[c] = riemann_cell_average(left, right, x0, xc - 0.5 * dx, xc + 0.5 * dx, t, entropic);
      f.bound_M = std::max(f.bound_M, std::abs(slab[c]));
    }
    f.data.push_back(std::move(slab));
  }
  return f;
}

double l1_distance_on_ball(const GridField& a, const GridField& b, double t, const Point& center,
                           double radius) {
  require_compatible(a, b);
  if (!(radius > 0.0)) return 0.0;
  const std::size_t n = a.level_index(t);
  const auto& ua = a.data[n];
  const auto& ub = b.data[n];
  double sum = 0.0;
  for (std::size_t c = 0; c < ua.size(); ++c)
    if (norm(a.grid.center(c) - center) <= radius) sum += std::abs(ua[c] - ub[c]);
  return sum * a.grid.cell_volume();
}

double l1_distance(const GridField& a, const GridField& b, std::size_t level) {
  require_compatible(a, b);
  const auto& ua = a.data.at(level);
  const auto& ub = b.data.at(level);
  double sum = 0.0;
  for (std::size_t c = 0; c < ua.size(); ++c) sum += std::abs(ua[c] - ub[c]);
  return sum * a.grid.cell_volume();
}

double numerical_entropy_flux(const FluxSpec& flux, const SchemeConfig& cfg, const Point& face, int axis,
                              double left, double right, double k) {
  auto kruzkov_q = [&](double v) { return sign(v - k) * (flux.eval(face, v)[axis] - flux.eval(face, k)[axis]); };
  if (cfg.scheme == Scheme::godunov_burgers) return kruzkov_q(exact_riemann_burgers(left, right, 0.0, 1.0));
  double lambda = std::max(std::abs(flux.dk(face, left)[axis]), std::abs(flux.dk(face, right)[axis]));
  if (cfg.scheme == Scheme::viscous) lambda += 2.0 * cfg.effective_viscosity() / cfg.grid.dx();
  return 0.5 * (kruzkov_q(left) + kruzkov_q(right)) - 0.5 * lambda * (std::abs(right - k) - std::abs(left - k));
}

double max_cell_entropy_violation(const GridField& u, const FluxSpec& flux, const SchemeConfig& cfg,
                                  const std::vector<double>& k_values) {
  if (u.grid.dim != 1) throw Error("cell entropy check supports one-dimensional fields");
  if (!flux.homogeneous) throw Error("cell entropy check needs a flux independent of x");
  if (cfg.store_every != 1) throw MissingTimeLevels("cell entropy check needs every time step stored");
  const int nx = u.grid.nx;
  const double dx = u.grid.dx();
  std::vector<double> ext(nx + 2);
  std::vector<double> q(nx + 1);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n + 1 < u.levels(); ++n) {
    const auto& now = u.data[n];
    const auto& next = u.data[n + 1];
    const double ratio = (u.times[n + 1] - u.times[n]) / dx;
    for (int i = 0; i < nx; ++i) ext[i + 1] = now[i];
    if (cfg.boundary == Boundary::periodic) {
      ext[0] = ext[nx];
      ext[nx + 1] = ext[1];
    } else {
      ext[0] = ext[1];
      ext[nx + 1] = ext[nx];
    }
    for (double k : k_values) {
      for (int f = 0; f <= nx; ++f) {
        const Point face{u.grid.lo + f * dx, 0.0};
        q[f] = numerical_entropy_flux(flux, cfg, face, 0, ext[f], ext[f + 1], k);
      }
      for (int i = 0; i < nx; ++i) {
        const double r = std::abs(next[i] - k) - std::abs(now[i] - k) + ratio * (q[i + 1] - q[i]);
        worst = std::max(worst, r);
      }
    }
  }
  return worst;
}

}  // namespace claw
