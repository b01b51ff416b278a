#ifndef CLAW_FV_SOLVER_HPP_
#define CLAW_FV_SOLVER_HPP_

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "claw/flux.hpp"
#include "claw/grid_field.hpp"

namespace claw {

namespace data {
struct Constant {
  double value = 0.0;
};
// left for x_1 < x0, right otherwise.
struct Riemann {
  double left = 0.0;
  double right = 0.0;
  double x0 = 0.0;
};
// height on [lo, hi]^dim, base elsewhere.
struct Box {
  double height = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  double base = 0.0;
};
// offset + amp * prod_i sin(2 pi freq x_i)
struct Sine {
  double amp = 1.0;
  double freq = 1.0;
  double offset = 0.0;
};
struct Function {
  std::function<double(const Point&)> fn;
};
// First stored level of a GridField file (slab or CSV).
struct File {
  std::string path;
};
}  // namespace data

using InitialData = std::variant<data::Constant, data::Riemann, data::Box, data::Sine, data::Function, data::File>;

enum class Scheme { rusanov, godunov_burgers, viscous };
enum class Boundary { periodic, outflow };

struct SchemeConfig {
  Grid grid;
  Scheme scheme = Scheme::rusanov;
  double cfl = 0.9;
  Boundary boundary = Boundary::outflow;
  double t_end = 1.0;
  int store_every = 1;
  // Viscosity of the viscous scheme; multiplied by dx when viscosity_per_dx.
  double viscosity = 0.0;
  bool viscosity_per_dx = false;
  // Lower bound for the state range used to fix the time step. Runs that are
  // compared cell by cell share this so that their time levels coincide.
  double state_bound = 0.0;

  double effective_viscosity() const { return viscosity_per_dx ? viscosity * grid.dx() : viscosity; }
  SchemeConfig refined() const;
};

std::string to_string(Scheme s);
std::string to_string(Boundary b);
Scheme scheme_from_string(const std::string& s);
Boundary boundary_from_string(const std::string& s);

// Exact cell averages of the initial data on the grid.
std::vector<double> cell_averages(const Grid& grid, const InitialData& u0);

// Time step and a-priori bounds a run of this configuration will use.
struct StepPlan {
  double dt = 0.0;
  double max_speed = 0.0;
  double state_bound = 0.0;  // max|u0| + T sup|div_x f|
  double blowup_limit = 0.0;
};
StepPlan plan_steps(const FluxSpec& flux, const std::vector<double>& u0_cells, const SchemeConfig& config);

// Forward-Euler monotone finite-volume solution of du/dt + div f(x,u) = 0.
GridField solve(const FluxSpec& flux, const InitialData& u0, const SchemeConfig& config);
// Same with eps * Laplacian(u) on the right-hand side.
GridField solve_viscous(const FluxSpec& flux, const InitialData& u0, double eps, SchemeConfig config);

// Interface flux of the configured scheme along one axis.
double numerical_flux(const FluxSpec& flux, const SchemeConfig& config, const Point& face, int axis,
                      double left, double right);

// Entropy solution of the Burgers Riemann problem centred at x = 0.
double exact_riemann_burgers(double left, double right, double x, double t);

// Average over [a, b] of the Riemann solution at time t (centred at x0).
// With entropic = false an increasing jump is kept as a discontinuity
// moving at the Rankine-Hugoniot speed (the expansion shock).
double riemann_cell_average(double left, double right, double x0, double a, double b, double t,
                            bool entropic = true);
GridField riemann_field(const Grid& grid, double left, double right, double x0,
                        const std::vector<double>& times, bool entropic = true);

// Midpoint-rule L1 norm of a - b over cells whose centres lie in the closed
// ball; level must be stored in both fields.
double l1_distance_on_ball(const GridField& a, const GridField& b, double t, const Point& center,
                           double radius);
double l1_distance(const GridField& a, const GridField& b, std::size_t level);

// Numerical Kruzkov entropy flux matching the scheme's interface flux:
// for Rusanov, 1/2 (q(a) + q(b)) - 1/2 lambda (|b-k| - |a-k|) with the same
// interface lambda; for Godunov, q at the interface Riemann state.
double numerical_entropy_flux(const FluxSpec& flux, const SchemeConfig& config, const Point& face, int axis,
                              double left, double right, double k);

// Largest per-cell residual of the discrete Kruzkov inequality
//   |u^{n+1}-k| - |u^n-k| + dt/dx (Q_{i+1/2} - Q_{i-1/2}) <= 0
// over all consecutive stored levels and all k. One-dimensional fields of
// x-independent fluxes only.
double max_cell_entropy_violation(const GridField& u, const FluxSpec& flux, const SchemeConfig& config,
                                  const std::vector<double>& k_values);

}  // namespace claw

#endif  // CLAW_FV_SOLVER_HPP_
