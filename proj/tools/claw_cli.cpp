// claw: command line front end for the solver and verifier.
//
//   claw run <config> [--force] [--output-root DIR]
//   claw study <config> --levels N [--force]
//   claw verify <fields...> --check KIND --flux NAME [--param k=v] [--set k=v]
//   claw catalog list
//
// Exit status: 0 when every check passed, 1 when a check failed, 2 on errors.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "claw/checks.hpp"
#include "claw/error.hpp"
#include "claw/field_io.hpp"
#include "claw/runner.hpp"

namespace {

std::map<std::string, std::string> key_values(const std::vector<std::string>& items, const char* option) {
  std::map<std::string, std::string> out;
  for (const std::string& kv : items) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw claw::ConfigError(std::string(option) + " expects key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

void print_summary(const claw::RunResult& r) {
  std::printf("%-24s %-20s %14s %14s  %s\n", "check", "kind", "value", "tolerance", "passed");
  for (const claw::NamedReport& n : r.reports)
    std::printf("%-24s %-20s %14.6g %14.6g  %s\n", n.name.c_str(), claw::to_string(n.report.kind).c_str(),
                n.report.value, n.report.tolerance, n.report.passed ? "yes" : "NO");
  std::printf("run directory: %s\n", r.directory.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume solver and entropy/contraction verifier for scalar conservation laws"};
  app.require_subcommand(1);

  std::string config_path;
  bool force = false;
  std::string output_root;

  auto* run_cmd = app.add_subcommand("run", "run an experiment config");
  run_cmd->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_flag("--force", force, "replace an existing run directory");
  run_cmd->add_option("--output-root", output_root, "root for run directories (default $CLAW_OUTPUT_ROOT or ./runs)");

  int levels = 3;
  auto* study_cmd = app.add_subcommand("study", "grid-refinement study of a config");
  study_cmd->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  study_cmd->add_option("--levels", levels, "number of grids (>= 2)")->required();
  study_cmd->add_flag("--force", force, "replace an existing study directory");
  study_cmd->add_option("--output-root", output_root, "root for run directories");

  std::vector<std::string> field_paths, flux_params, check_params;
  std::string kind, flux_name, report_path;
  std::uint64_t seed = 0;
  auto* verify_cmd = app.add_subcommand("verify", "evaluate one check on stored fields");
  verify_cmd->add_option("fields", field_paths, "GridField files (.csv or .slab)")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--check", kind, "entropy_inequality, kato, cone_contraction, global_contraction, uniqueness, doubling")
      ->required();
  verify_cmd->add_option("--flux", flux_name, "catalog flux name")->required();
  verify_cmd->add_option("--param", flux_params, "flux parameter key=value");
  verify_cmd->add_option("--set", check_params, "check parameter key=value (same keys as a [check.*] section)");
  verify_cmd->add_option("--seed", seed, "seed for random sample points");
  verify_cmd->add_option("--report", report_path, "also write the report JSON here");

  auto* catalog_cmd = app.add_subcommand("catalog", "flux catalog");
  catalog_cmd->add_subcommand("list", "list catalog fluxes")->final_callback([] {});
  catalog_cmd->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    claw::RunOptions opts;
    opts.force = force;
    if (!output_root.empty()) opts.output_root = output_root;

    if (*run_cmd) {
      const claw::RunResult r = claw::run(claw::load_config(config_path), opts);
      print_summary(r);
      return r.all_passed() ? 0 : 1;
    }
    if (*study_cmd) {
      const claw::StudyTable t = claw::convergence_study(claw::load_config(config_path), levels, opts);
      std::cout << claw::study_csv(t) << "study directory: " << t.directory.string() << "\n";
      return 0;
    }
    if (*verify_cmd) {
      claw::FluxConfig fc{flux_name, key_values(flux_params, "--param")};
      const claw::FluxSpec flux = claw::make_flux(fc);
      claw::CheckConfig cc;
      cc.name = kind;
      cc.kind = claw::check_kind_from_string(kind);
      cc.params = key_values(check_params, "--set");
      claw::CheckPlan plan = claw::plan_check(cc, flux.dim);
      if (plan.fields.size() != field_paths.size())
        throw claw::ConfigError("check " + kind + " reads " + std::to_string(plan.fields.size()) + " field files, got " +
                                std::to_string(field_paths.size()));
      std::map<std::string, claw::GridField> fields;
      for (std::size_t i = 0; i < field_paths.size(); ++i) fields.emplace(plan.fields[i], claw::read_field(field_paths[i]));
      const claw::FieldLookup lookup = [&](const std::string& key) -> const claw::GridField& { return fields.at(key); };
      const claw::CheckOutcome out = claw::evaluate_check(plan, flux, lookup, seed);
      const std::string json = out.report.to_json();
      std::cout << json << "\n";
      if (!report_path.empty()) {
        std::FILE* f = std::fopen(report_path.c_str(), "w");
        if (!f) throw claw::FormatError("cannot write " + report_path);
        std::fprintf(f, "%s\n", json.c_str());
        std::fclose(f);
      }
      return out.report.passed ? 0 : 1;
    }
    if (*catalog_cmd) {
      for (const claw::CatalogEntry& e : claw::catalog_entries()) {
        std::printf("%-12s dim=%d  %s", e.name.c_str(), e.dim, e.description.c_str());
        for (const auto& [k, v] : e.default_params) std::printf("  %s=%g", k.c_str(), v);
        std::printf("\n");
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
