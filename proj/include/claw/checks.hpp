#ifndef CLAW_CHECKS_HPP_
#define CLAW_CHECKS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "claw/config.hpp"
#include "claw/verifier.hpp"

namespace claw {

struct TestFunctionSpec {
  enum class Shape { bump, cone };
  Shape shape = Shape::bump;
  Point center{};
  double radius = 0.0;  // bump
  double t_center = 0.0;
  double t_radius = 0.0;
  double R = 0.0;  // cone
  std::optional<double> N;
  double rho = 0.0, tau = 0.0, h = 0.0, eps = 0.0;
};

// Typed form of one [check.*] section.
struct CheckPlan {
  CheckConfig source;
  // Field keys read by the check, in order. Uniqueness uses
  // "<data>@<scheme>" and "<data>@<scheme>/fine".
  std::vector<std::string> fields;

  std::optional<TestFunctionSpec> test;
  std::optional<double> k0;  // single Kruzkov pair instead of the sweep
  int k0_count = 9;
  std::vector<int> smooth_n{4, 16, 64};
  WeakFormOptions weak;

  double radius = 0.0;
  std::vector<double> radii;
  ContractionOptions contraction;

  std::string data_name;
  std::vector<std::string> schemes;
  std::optional<data::Riemann> riemann;
  UniquenessOptions uniqueness;

  std::vector<double> eps;
  std::vector<SamplePoint> points;  // explicit sample points
  int random_points = 0;            // or this many seeded ones in the box below
  double x_lo = 0.0, x_hi = 0.0, t_lo = 0.0, t_hi = 0.0;
  DoublingOptions doubling;
};

// Validates against the config (field and scheme names must exist).
CheckPlan plan_check(const CheckConfig& check, const ExperimentConfig& config);
// Standalone form used when the fields come from files.
CheckPlan plan_check(const CheckConfig& check, int dim);

struct CheckOutcome {
  ResidualReport report;
  std::vector<ProfileRow> profile;  // cone and global contraction
  std::optional<DoublingTable> doubling;
  std::optional<UniquenessResult> uniqueness;
};

using FieldLookup = std::function<const GridField&(const std::string& key)>;

CheckOutcome evaluate_check(const CheckPlan& plan, const FluxSpec& flux, const FieldLookup& field,
                            std::uint64_t seed);

}  // namespace claw

#endif  // CLAW_CHECKS_HPP_
