#ifndef CLAW_FLUX_HPP_
#define CLAW_FLUX_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "claw/point.hpp"

namespace claw {

// An analytic flux f : R^d x R -> R^d together with its closed-form
// derivatives. Instances are immutable once built by the catalog.
struct FluxSpec {
  using VectorMap = std::function<Point(const Point& x, double k)>;
  using ScalarMap = std::function<double(const Point& x, double k)>;
  using GradMap = std::function<Point(const Point& x, double k, int component)>;
  using BoundMap = std::function<double(double radius, double state_bound)>;

  std::string name;
  int dim = 1;
  VectorMap eval;
  VectorMap dk;          // d/dk f(x, k)
  ScalarMap div_x;       // divergence in x at frozen k
  GradMap grad_x;        // grad_x f_i(x, k)
  // Points where D_x f is not defined. Derivatives are never evaluated there.
  std::vector<Point> singular_points;
  // Closed-form sup over |x| <= R, |k|,|k'| <= M of |f(x,k)-f(x,k')|/|k-k'|,
  // when the catalog entry knows it.
  BoundMap lipschitz_bound;
  bool homogeneous = false;  // f does not depend on x
  std::map<std::string, double> params;

  bool is_singular(const Point& x, double tol = 1e-14) const;
};

struct CatalogEntry {
  std::string name;
  int dim;
  std::string description;
  std::map<std::string, double> default_params;
};

const std::vector<CatalogEntry>& catalog_entries();

// Throws UnknownFlux for unregistered names and ConfigError for parameters
// the entry does not declare.
FluxSpec catalog_lookup(const std::string& name, const std::map<std::string, double>& params = {});

// Moves x off any declared singular point by a machine-scale offset.
Point avoid_singular(const FluxSpec& flux, Point x);

struct LipschitzOptions {
  int initial_grid = 200;
  int max_doublings = 3;
  double agreement = 0.01;
  bool use_analytic = true;
};

// Upper estimate of sup_{|x|<=R, |k|,|k'|<=M} |f(x,k)-f(x,k')| / |k-k'|.
double lipschitz_constant(const FluxSpec& flux, double radius, double state_bound,
                          LipschitzOptions opts = {});

// The purely sampled part of lipschitz_constant: max over the grid of the
// difference quotients and |d/dk f|.
double sampled_lipschitz(const FluxSpec& flux, double radius, double state_bound, int grid);

// Sampled sup over k in [k_lo, k_hi] and |y - x| = r of
// |f(y,k) - f(x,k) - D_x f(x,k)(y-x)| / |y-x|, one value per radius.
std::vector<double> uniform_diffquot_deficit(const FluxSpec& flux, const Point& x, double k_lo,
                                             double k_hi, const std::vector<double>& radii);

// sup over the box [lo,hi]^d x [-M, M] of |d/dk f| and |div_x f|, sampled on
// the given x points (interface locations of a grid) and a k grid.
struct FluxBounds {
  double max_speed = 0.0;
  double max_div = 0.0;
};
FluxBounds sample_flux_bounds(const FluxSpec& flux, const std::vector<Point>& xs, double state_bound);

}  // namespace claw

#endif  // CLAW_FLUX_HPP_
