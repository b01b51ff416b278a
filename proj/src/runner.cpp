#include "claw/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "claw/checks.hpp"
#include "claw/error.hpp"
#include "claw/field_io.hpp"
#include "claw/svg.hpp"

namespace claw {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

void prepare_directory(const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw ConfigError("output path " + dir.string() + " is not a directory");
    if (!fs::is_empty(dir)) {
      if (!force) throw ConfigError("run directory " + dir.string() + " already exists; pass --force to replace it");
      fs::remove_all(dir);
    }
  }
  fs::create_directories(dir);
}

std::string file_stem(const std::string& key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '@', '.');
  std::replace(s.begin(), s.end(), '/', '.');
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Row of cells through the domain centre for 2-d snapshots.
svg::Series snapshot(const GridField& f, std::size_t level) {
  svg::Series s;
  std::ostringstream label;
  label << "t=" << std::setprecision(3) << f.times[level];
  s.label = label.str();
  const Grid& g = f.grid;
  const std::size_t row = g.dim == 2 ? static_cast<std::size_t>(g.nx / 2) : 0;
  for (int i = 0; i < g.nx; ++i) {
    const std::size_t c = row * g.nx + i;
    s.x.push_back(g.coord(i));
    s.y.push_back(f.data[level][c]);
  }
  return s;
}

void write_snapshots(const fs::path& path, const std::string& name, const GridField& f) {
  std::vector<svg::Series> series;
  const std::size_t last = f.levels() - 1;
  std::vector<std::size_t> picks{0, last / 3, 2 * last / 3, last};
  picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
  for (std::size_t l : picks) series.push_back(snapshot(f, l));
  svg::Plot plot;
  plot.title = "solution " + name + (f.grid.dim == 2 ? " (middle row)" : "");
  plot.x_label = "x";
  plot.y_label = "u";
  svg::write(path.string(), plot, series);
}

void write_field(const fs::path& dir, const std::string& key, const GridField& f) {
  const std::string stem = file_stem(key);
  write_csv(f, (dir / (stem + ".csv")).string());
  write_slab(f, (dir / (stem + ".slab")).string());
}

std::string profile_csv(const std::vector<ProfileRow>& rows) {
  std::ostringstream os;
  os << "t,radius,l1_mass\n";
  os.precision(17);
  for (const ProfileRow& r : rows) os << r.t << "," << r.radius << "," << r.l1_mass << "\n";
  return os.str();
}

std::string doubling_csv(const DoublingTable& t) {
  std::ostringstream os;
  os << "eps,point,I1,I2,I3,I4,lim1,lim2,lim3,lim4,dev1,dev2,dev3,dev4\n";
  os.precision(17);
  for (const DoublingRow& r : t.rows) {
    os << r.eps << "," << r.point;
    for (double v : r.integrals) os << "," << v;
    for (double v : r.limits) os << "," << v;
    for (double v : r.deviations) os << "," << v;
    os << "\n";
  }
  return os.str();
}

std::string uniqueness_csv(const UniquenessResult& u) {
  std::ostringstream os;
  os.precision(17);
  os << "pair,coarse,fine,ratio\n";
  std::size_t k = 0;
  for (std::size_t i = 0; i < u.labels.size(); ++i)
    for (std::size_t j = i + 1; j < u.labels.size(); ++j, ++k)
      os << u.labels[i] << "|" << u.labels[j] << "," << u.coarse_distances[k] << "," << u.fine_distances[k] << ","
         << u.ratios[k] << "\n";
  for (std::size_t i = 0; i < u.oracle_ratios.size(); ++i)
    os << u.labels[i] << "|exact," << u.oracle_coarse[i] << "," << u.oracle_fine[i] << "," << u.oracle_ratios[i]
       << "\n";
  return os.str();
}

std::string summary_csv(const std::vector<NamedReport>& reports) {
  std::ostringstream os;
  os << "check,kind,value,tolerance,passed\n";
  for (const NamedReport& r : reports)
    os << r.name << "," << to_string(r.report.kind) << "," << fmt(r.report.value) << "," << fmt(r.report.tolerance)
       << "," << (r.report.passed ? "true" : "false") << "\n";
  return os.str();
}

// Solves every field the config and its checks need. Data fields share the
// base scheme and one time step so that they can be compared level by level.
std::map<std::string, GridField> solve_fields(const ExperimentConfig& config, const FluxSpec& flux,
                                              const std::vector<CheckPlan>& plans) {
  std::map<std::string, GridField> fields;
  SchemeConfig base = make_scheme(config, config.scheme());
  for (const DataConfig& d : config.data)
    base.state_bound = std::max(base.state_bound, max_abs(cell_averages(base.grid, make_initial_data(d))));
  for (const DataConfig& d : config.data) fields.emplace(d.name, solve(flux, make_initial_data(d), base));

  for (const CheckPlan& p : plans) {
    if (p.source.kind != CheckKind::uniqueness) continue;
    const InitialData u0 = make_initial_data(config.field_data(p.data_name));
    for (const std::string& s : p.schemes) {
      const std::string key = p.data_name + "@" + s;
      if (fields.count(key)) continue;
      const SchemeConfig sc = make_scheme(config, config.scheme(s));
      fields.emplace(key, solve(flux, u0, sc));
      fields.emplace(key + "/fine", solve(flux, u0, sc.refined()));
    }
  }
  return fields;
}

}  // namespace

bool RunResult::all_passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const NamedReport& r) { return r.report.passed; });
}

fs::path run_directory(const ExperimentConfig& config, const RunOptions& opts) {
  if (config.output_dir) return fs::path(*config.output_dir);
  fs::path root = "runs";
  if (opts.output_root) root = *opts.output_root;
  else if (const char* env = std::getenv(kOutputRootEnv); env && *env) root = env;
  return root / config.name;
}

RunResult run(const ExperimentConfig& config, const RunOptions& opts) {
  RunResult result;
  result.directory = run_directory(config, opts);
  prepare_directory(result.directory, opts.force);
  const fs::path& dir = result.directory;
  try {
    write_text(dir / "config.ini", serialize_config(config));
    const FluxSpec flux = make_flux(config.flux);
    std::vector<CheckPlan> plans;
    for (const CheckConfig& c : config.checks) plans.push_back(plan_check(c, config));

    const std::map<std::string, GridField> fields = solve_fields(config, flux, plans);
    fs::create_directories(dir / "fields");
    fs::create_directories(dir / "plots");
    for (const auto& [key, f] : fields) {
      write_field(dir / "fields", key, f);
      if (config.data.end() != std::find_if(config.data.begin(), config.data.end(),
                                            [&](const DataConfig& d) { return d.name == key; }))
        write_snapshots(dir / "plots" / ("solution_" + file_stem(key) + ".svg"), key, f);
    }

    const FieldLookup lookup = [&](const std::string& key) -> const GridField& {
      const auto it = fields.find(key);
      if (it == fields.end()) throw ConfigError("no field named '" + key + "'");
      return it->second;
    };
    fs::create_directories(dir / "reports");
    for (const CheckPlan& p : plans) {
      const CheckOutcome out = evaluate_check(p, flux, lookup, config.seed);
      const std::string& name = p.source.name;
      write_text(dir / "reports" / (name + ".json"), out.report.to_json() + "\n");
      if (!out.profile.empty()) {
        write_text(dir / "reports" / ("profile_" + name + ".csv"), profile_csv(out.profile));
        svg::Series s{"L1 distance", {}, {}, true};
        for (const ProfileRow& r : out.profile) {
          s.x.push_back(r.t);
          s.y.push_back(r.l1_mass);
        }
        svg::Plot plot;
        plot.title = "contraction profile " + name;
        plot.x_label = "t";
        plot.y_label = "L1 mass";
        svg::write((dir / "plots" / ("profile_" + name + ".svg")).string(), plot, {s});
      }
      if (out.doubling) write_text(dir / "reports" / ("doubling_" + name + ".csv"), doubling_csv(*out.doubling));
      if (out.uniqueness) write_text(dir / "reports" / ("uniqueness_" + name + ".csv"), uniqueness_csv(*out.uniqueness));
      result.reports.push_back({name, out.report});
    }
    write_text(dir / "summary.csv", summary_csv(result.reports));
  } catch (const std::exception& e) {
    write_text(dir / "FAILED", std::string(e.what()) + "\n");
    throw;
  }
  return result;
}

namespace {

// Cell averages of a fine slab over the cells of a grid `factor` times coarser.
std::vector<double> restrict_to(const Grid& coarse, const Grid& fine, const std::vector<double>& values) {
  const int factor = fine.nx / coarse.nx;
  std::vector<double> out(coarse.cells(), 0.0);
  const double w = 1.0 / std::pow(static_cast<double>(factor), coarse.dim);
  for (std::size_t c = 0; c < fine.cells(); ++c) {
    const int i = static_cast<int>(c % fine.nx) / factor;
    const int j = coarse.dim == 2 ? static_cast<int>(c / fine.nx) / factor : 0;
    out[static_cast<std::size_t>(j) * coarse.nx + i] += w * values[c];
  }
  return out;
}

double l1_slab(const Grid& g, const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += std::abs(a[c] - b[c]);
  return s * g.cell_volume();
}

}  // namespace

StudyTable convergence_study(const ExperimentConfig& base, int levels, const RunOptions& opts) {
  if (levels < 2) throw ConfigError("a convergence study needs at least 2 levels");
  StudyTable table;
  const FluxSpec flux = make_flux(base.flux);
  const InitialData u0 = make_initial_data(base.field_data("u"));
  const auto* riemann = std::get_if<data::Riemann>(&u0);
  const auto* constant = std::get_if<data::Constant>(&u0);
  const bool exact_riemann = riemann && flux.name == "burgers1d";
  table.oracle = constant || exact_riemann ? "exact" : "self";

  std::vector<CheckPlan> contraction;
  for (const CheckConfig& c : base.checks)
    if (c.kind == CheckKind::cone_contraction || c.kind == CheckKind::global_contraction) {
      contraction.push_back(plan_check(c, base));
      table.check_names.push_back(c.name);
    }

  ExperimentConfig cfg = base;
  // Final states by level; the self oracle compares each level with the next.
  std::map<int, std::pair<Grid, std::vector<double>>> finals;
  const auto final_state = [&](int l) -> const std::pair<Grid, std::vector<double>>& {
    auto it = finals.find(l);
    if (it == finals.end()) {
      ExperimentConfig c = base;
      c.grid.nx = base.grid.nx << l;
      const SchemeConfig sc = make_scheme(c, c.scheme());
      it = finals.emplace(l, std::make_pair(sc.grid, solve(flux, u0, sc).data.back())).first;
    }
    return it->second;
  };

  for (int l = 0; l < levels; ++l) {
    cfg.grid.nx = base.grid.nx << l;
    const SchemeConfig sc = make_scheme(cfg, cfg.scheme());
    const std::vector<double>& final = final_state(l).second;
    const double t_end = sc.t_end;
    StudyRow row;
    row.nx = cfg.grid.nx;
    row.dx = sc.grid.dx();
    std::vector<double> exact;
    if (constant) exact.assign(sc.grid.cells(), constant->value);
    else if (exact_riemann) exact = riemann_field(sc.grid, riemann->left, riemann->right, riemann->x0, {t_end}).data.front();
    else {
      const auto& [fine_grid, fine] = final_state(l + 1);
      exact = restrict_to(sc.grid, fine_grid, fine);
    }
    row.error = l1_slab(sc.grid, final, exact);
    finals.erase(l - 1);

    if (!contraction.empty()) {
      const std::map<std::string, GridField> fields = solve_fields(cfg, flux, contraction);
      const FieldLookup lookup = [&](const std::string& key) -> const GridField& { return fields.at(key); };
      for (const CheckPlan& p : contraction) {
        const CheckOutcome out = evaluate_check(p, flux, lookup, cfg.seed);
        double scale = 0.0;
        for (const ProfileRow& r : out.profile) scale = std::max(scale, r.l1_mass);
        row.violations.push_back(positive_increment(out.report.value, scale));
      }
    }
    row.exact = row.error <= 1e-12;
    if (!table.rows.empty()) {
      const StudyRow& prev = table.rows.back();
      if (!row.exact && !prev.exact) row.order = std::log2(prev.error / row.error);
      for (std::size_t k = 0; k < row.violations.size(); ++k) {
        const double a = prev.violations[k], b = row.violations[k];
        row.violation_ratios.push_back(b == 0.0 ? std::numeric_limits<double>::infinity() : a / b);
      }
    }
    table.rows.push_back(row);
  }

  ExperimentConfig named = base;
  named.name = base.name + "_study";
  named.output_dir.reset();
  table.directory = base.output_dir ? fs::path(*base.output_dir) / "study" : run_directory(named, opts);
  prepare_directory(table.directory, opts.force);
  write_text(table.directory / "config.ini", serialize_config(base));
  write_text(table.directory / "study.csv", study_csv(table));
  svg::Series s{"L1 error (" + table.oracle + " oracle)", {}, {}, true};
  for (const StudyRow& r : table.rows) {
    s.x.push_back(r.dx);
    s.y.push_back(r.error);
  }
  svg::Plot plot;
  plot.title = "convergence " + base.name;
  plot.x_label = "dx";
  plot.y_label = "L1 error at t_end";
  plot.log_x = plot.log_y = true;
  svg::write((table.directory / "convergence.svg").string(), plot, {s});
  return table;
}

std::string study_csv(const StudyTable& table) {
  std::ostringstream os;
  os << "nx,dx,error,order";
  for (const std::string& n : table.check_names) os << ",violation_" << n << ",shrink_" << n;
  os << "\n";
  for (const StudyRow& r : table.rows) {
    os << r.nx << "," << fmt(r.dx) << "," << fmt(r.error) << ",";
    if (r.exact) os << "exact";
    else if (r.order) os << fmt(*r.order);
    for (std::size_t k = 0; k < r.violations.size(); ++k) {
      os << "," << fmt(r.violations[k]) << ",";
      if (k < r.violation_ratios.size()) os << fmt(r.violation_ratios[k]);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace claw
