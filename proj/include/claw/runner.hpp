#ifndef CLAW_RUNNER_HPP_
#define CLAW_RUNNER_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "claw/config.hpp"
#include "claw/verifier.hpp"

namespace claw {

// Name of the environment variable holding the default output root.
inline constexpr const char* kOutputRootEnv = "CLAW_OUTPUT_ROOT";

struct RunOptions {
  bool force = false;  // replace an existing run directory
  std::optional<std::filesystem::path> output_root;
};

struct NamedReport {
  std::string name;
  ResidualReport report;
};

struct RunResult {
  std::filesystem::path directory;
  std::vector<NamedReport> reports;
  bool all_passed() const;
};

// Run directory of a config: output_dir if set, otherwise
// <root>/<name> with root from options, $CLAW_OUTPUT_ROOT or "runs".
std::filesystem::path run_directory(const ExperimentConfig& config, const RunOptions& opts);

// Solves every [data.*] field with the base scheme (sharing one time step),
// evaluates every check and writes the artifacts. On failure a FAILED file
// with the error message is left in the directory and the error rethrown.
RunResult run(const ExperimentConfig& config, const RunOptions& opts = {});

struct StudyRow {
  int nx = 0;
  double dx = 0.0;
  double error = 0.0;
  std::optional<double> order;  // to the next coarser level
  bool exact = false;           // errors at round-off: order is meaningless
  std::vector<double> violations;       // per contraction check
  std::vector<double> violation_ratios;  // previous level / this level
};

struct StudyTable {
  std::string oracle;  // "exact" or "self"
  std::vector<std::string> check_names;
  std::vector<StudyRow> rows;
  std::filesystem::path directory;
};

// Halves dx `levels - 1` times starting from the config grid. Errors of the
// field "u" at t_end are taken against the exact solution (constant data,
// Burgers Riemann data) or against the next refinement of each level.
StudyTable convergence_study(const ExperimentConfig& base, int levels, const RunOptions& opts = {});

// Writes a header and one row per line; strings are quoted when needed.
std::string study_csv(const StudyTable& table);

}  // namespace claw

#endif  // CLAW_RUNNER_HPP_
