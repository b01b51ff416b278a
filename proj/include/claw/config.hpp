#ifndef CLAW_CONFIG_HPP_
#define CLAW_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "claw/fv_solver.hpp"
#include "claw/verifier.hpp"

namespace claw {

// Ordered key/value strings of one config section. Values are kept verbatim
// so that serialization round-trips exactly.
using Params = std::map<std::string, std::string>;

struct FluxConfig {
  std::string name;
  Params params;  // catalog parameters, e.g. c for linear1d
};

struct GridConfig {
  int dim = 1;
  double lo = 0.0;
  double hi = 1.0;
  int nx = 0;
  double t_end = 0.0;
  int store_every = 1;
};

struct SchemeEntry {
  std::string name;  // "" for the base [scheme] section
  Scheme scheme = Scheme::rusanov;
  double cfl = 0.9;
  Boundary boundary = Boundary::outflow;
  std::optional<double> viscosity;
  bool viscosity_per_dx = false;
};

struct DataConfig {
  std::string name;  // section suffix: u, v, ...
  std::string type;  // constant, riemann, box, sine, file
  Params values;
};

struct CheckConfig {
  std::string name;
  CheckKind kind = CheckKind::entropy_inequality;
  Params params;
};

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 0;
  std::optional<std::string> output_dir;
  FluxConfig flux;
  GridConfig grid;
  std::vector<SchemeEntry> schemes;  // schemes[0] is the base scheme
  std::vector<DataConfig> data;
  std::vector<CheckConfig> checks;

  const SchemeEntry& scheme(const std::string& name = "") const;
  const DataConfig& field_data(const std::string& name) const;
};

bool operator==(const FluxConfig&, const FluxConfig&);
bool operator==(const GridConfig&, const GridConfig&);
bool operator==(const SchemeEntry&, const SchemeEntry&);
bool operator==(const DataConfig&, const DataConfig&);
bool operator==(const CheckConfig&, const CheckConfig&);
bool operator==(const ExperimentConfig&, const ExperimentConfig&);

// Strict parser: unknown sections or keys, missing required keys and bad
// values raise ConfigError with the line and key involved.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

// Typed views used by the runner. All of them validate their input.
FluxSpec make_flux(const FluxConfig& flux);
Grid make_grid(const GridConfig& grid);
SchemeConfig make_scheme(const ExperimentConfig& config, const SchemeEntry& entry);
InitialData make_initial_data(const DataConfig& data);

// Reads typed values out of a Params map and rejects leftovers.
class ParamReader {
 public:
  ParamReader(const Params& params, std::string context);

  double number(const std::string& key);
  std::optional<double> optional_number(const std::string& key);
  int integer(const std::string& key);
  std::optional<int> optional_integer(const std::string& key);
  std::string text(const std::string& key);
  std::optional<std::string> optional_text(const std::string& key);
  std::vector<double> numbers(const std::string& key);
  std::optional<std::vector<double>> optional_numbers(const std::string& key);
  std::vector<std::string> words(const std::string& key);
  bool flag(const std::string& key, bool fallback);
  // Throws ConfigError naming the first key nobody asked for.
  void finish() const;

 private:
  const Params& params_;
  std::string context_;
  std::vector<std::string> used_;
  const std::string* find(const std::string& key);
};

double parse_number(const std::string& text, const std::string& context);

}  // namespace claw

#endif  // CLAW_CONFIG_HPP_
