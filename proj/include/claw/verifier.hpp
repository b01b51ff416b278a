#ifndef CLAW_VERIFIER_HPP_
#define CLAW_VERIFIER_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "claw/entropy.hpp"
#include "claw/flux.hpp"
#include "claw/fv_solver.hpp"
#include "claw/grid_field.hpp"
#include "claw/mollifier.hpp"

namespace claw {

enum class CheckKind { entropy_inequality, kato, cone_contraction, global_contraction, uniqueness, doubling };

std::string to_string(CheckKind k);
CheckKind check_kind_from_string(const std::string& s);

struct ResidualReport {
  CheckKind kind = CheckKind::entropy_inequality;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::map<std::string, std::string> metadata;

  void note(const std::string& key, double v);
  void note(const std::string& key, const std::string& v) { metadata[key] = v; }
  // Pretty-printed JSON object.
  std::string to_json() const;
};

struct WeakFormOptions {
  // Constant of the slack model tol = C (dx + dt) |support|. Defaults to
  // 10 Lip(phi) M with M the largest field bound.
  std::optional<double> c_tol;
};

// Space-time weak form of the entropy inequality for one pair:
//   int int [dt phi eta(u) + phi (div_x q - eta'(u) div_x f) + grad phi . q] >= 0.
// The field is held constant on each cell and between consecutive stored
// levels; dt phi is integrated exactly over each time slab and grad phi
// exactly across each cell, so constant states produce exact cancellation.
ResidualReport entropy_residual(const GridField& u, const FluxSpec& flux, const EntropyPair& pair,
                                const TestFunction& phi, WeakFormOptions opts = {});

// Worst (smallest) entropy residual over a sweep of pairs.
ResidualReport entropy_sweep_residual(const GridField& u, const FluxSpec& flux,
                                      const std::vector<EntropyPair>& pairs, const TestFunction& phi,
                                      WeakFormOptions opts = {});

// Two-solution Kruzkov (Kato) integral with eta = |u - v| and
// q = sign(u - v)(f(x,u) - f(x,v)).
ResidualReport kato_lhs(const GridField& u, const GridField& v, const FluxSpec& flux, const TestFunction& psi,
                        WeakFormOptions opts = {});

struct ContractionOptions {
  Point center{};
  // Constant of tol = C (dx + dt). Defaults to 2 M times the size of the
  // ball boundary (2 in 1-d, 2 pi R in 2-d).
  std::optional<double> c_tol;
  // Overrides lipschitz_constant when set.
  std::optional<double> speed;
  // State bound M used for N; defaults to the larger bound_M of the fields.
  std::optional<double> bound;
};

// Positive part of an increment, with values inside the round-off band of
// `scale` reported as 0.
double positive_increment(double value, double scale);

struct ProfileRow {
  double t = 0.0;
  double radius = 0.0;
  double l1_mass = 0.0;
};

struct ConeProfile {
  std::vector<ProfileRow> rows;
  ResidualReport report;  // value = largest increase between consecutive rows
};

ConeProfile cone_contraction_profile(const GridField& u, const GridField& v, const FluxSpec& flux, double radius,
                                     ContractionOptions opts = {});

struct GlobalContraction {
  std::vector<double> radii;
  std::vector<double> speed_over_radius;  // N(R)/R
  std::vector<ProfileRow> rows;           // radius column holds +inf
  ResidualReport report;
};

GlobalContraction global_contraction_check(const GridField& u, const GridField& v, const FluxSpec& flux,
                                           const std::vector<double>& radii, ContractionOptions opts = {});

struct UniquenessOptions {
  // Compare on the ball of this radius shrunk to R - t_end N; whole domain if unset.
  std::optional<double> radius;
  Point center{};
  double required_ratio = 1.5;
  double required_oracle_ratio = 1.4;
};

struct UniquenessResult {
  std::vector<std::string> labels;
  std::vector<double> coarse_distances;  // pairwise, (i, j) with i < j in order
  std::vector<double> fine_distances;
  std::vector<double> ratios;
  std::vector<double> oracle_coarse;  // per variant, empty without an oracle
  std::vector<double> oracle_fine;
  std::vector<double> oracle_ratios;
  ResidualReport report;
};

// Solves from the same data under every configuration and under its dx/2
// refinement and compares the final states pairwise. The exact Riemann
// solution is used as an extra oracle for Burgers Riemann data.
UniquenessResult uniqueness_experiment(const FluxSpec& flux, const InitialData& u0,
                                       const std::vector<SchemeConfig>& seeds, UniquenessOptions opts = {});

// Same comparison on already computed fields: coarse[i] and fine[i] are the
// runs of variant i, compared at their last stored level. `oracle` enables
// the exact Burgers Riemann check.
UniquenessResult uniqueness_from_fields(const FluxSpec& flux, const std::vector<GridField>& coarse,
                                        const std::vector<GridField>& fine, std::vector<std::string> labels,
                                        std::optional<data::Riemann> oracle, UniquenessOptions opts = {});

struct SamplePoint {
  Point x{};
  double t = 0.0;
};

struct DoublingRow {
  double eps = 0.0;
  std::size_t point = 0;
  double integrals[4] = {0, 0, 0, 0};
  double limits[4] = {0, 0, 0, 0};
  double deviations[4] = {0, 0, 0, 0};
};

struct DoublingOptions {
  // Lipschitz estimate of the fields for the jump detector; defaults to the
  // largest cell-to-cell slope at the first stored level.
  std::optional<double> lip_estimate;
  double monotone_slack = 1e-13;
};

struct DoublingTable {
  std::vector<DoublingRow> rows;
  std::vector<std::array<double, 4>> max_deviation;  // one entry per eps
  ResidualReport report;
};

// Evaluates the doubled-variable integrals I1..I4 at each sample point and
// scale and compares them with their eps -> 0 limits
//   |u - v|, q(x,u,v), div_x q(x,u,v), -div_x q(x,u,v).
// In 2-d the I2 deviation is the Euclidean norm.
DoublingTable doubling_diagnostics(const GridField& u, const GridField& v, const FluxSpec& flux,
                                   const std::vector<double>& eps_list, const std::vector<SamplePoint>& points,
                                   DoublingOptions opts = {});

}  // namespace claw

#endif  // CLAW_VERIFIER_HPP_
