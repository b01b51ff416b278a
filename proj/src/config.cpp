#include "claw/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "claw/checks.hpp"
#include "claw/error.hpp"

namespace claw {

namespace pt = boost::property_tree;

double parse_number(const std::string& text, const std::string& context) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && std::isspace(static_cast<unsigned char>(*first))) ++first;
  while (last > first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
  if (first < last && *first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last)
    throw ConfigError(context + ": '" + text + "' is not a number");
  return v;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Line numbers of "section" and "section.key" for error messages.
class LineIndex {
 public:
  explicit LineIndex(const std::string& text) {
    std::istringstream in(text);
    std::string line, section;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      const std::string t = trim(line);
      if (t.empty() || t[0] == ';' || t[0] == '#') continue;
      if (t.front() == '[' && t.back() == ']') {
        section = trim(t.substr(1, t.size() - 2));
        lines_.emplace(section, n);
      } else if (const auto eq = t.find('='); eq != std::string::npos) {
        lines_.emplace(section + "\x1f" + trim(t.substr(0, eq)), n);
      }
    }
  }

  // Line of the key, falling back to the section header; 0 if unknown.
  int line(const std::string& section, const std::string& key = "") const {
    if (!key.empty())
      if (const auto it = lines_.find(section + "\x1f" + key); it != lines_.end()) return it->second;
    const auto it = lines_.find(section);
    return it == lines_.end() ? 0 : it->second;
  }

  std::string where(const std::string& section, const std::string& key = "") const {
    std::ostringstream os;
    if (const int n = line(section, key)) os << "line " << n << ": ";
    os << "[" << section << "]";
    if (!key.empty()) os << " key '" << key << "'";
    return os.str();
  }

 private:
  std::map<std::string, int> lines_;
};

Params section_params(const pt::ptree& node) {
  Params p;
  for (const auto& [k, v] : node) p[k] = v.data();
  return p;
}

std::string strip_prefix(const std::string& what) {
  const std::string tag = "ConfigError: ";
  return what.rfind(tag, 0) == 0 ? what.substr(tag.size()) : what;
}

// Re-raises ConfigErrors from `body` with the source name and the line of
// the key they mention (or of the section).
template <class F>
void with_context(const std::string& source, const LineIndex& idx, const std::string& section, F&& body) {
  try {
    body();
  } catch (const ConfigError& e) {
    const std::string msg = strip_prefix(e.what());
    std::string key;
    if (const auto k = msg.find("key '"); k != std::string::npos) {
      const auto end = msg.find('\'', k + 5);
      if (end != std::string::npos) key = msg.substr(k + 5, end - k - 5);
    }
    std::ostringstream os;
    os << source << ": ";
    if (const int n = idx.line(section, key)) os << "line " << n << ": ";
    throw ConfigError(os.str() + msg);
  }
}

std::string fmt(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

const std::set<std::string> kDataTypes = {"constant", "riemann", "box", "sine", "file"};

std::vector<std::string> data_keys(const std::string& type) {
  if (type == "constant") return {"value"};
  if (type == "riemann") return {"left", "right", "x0"};
  if (type == "box") return {"height", "lo", "hi", "base"};
  if (type == "sine") return {"amp", "freq", "offset"};
  return {"path"};
}

}  // namespace

ParamReader::ParamReader(const Params& params, std::string context) : params_(params), context_(std::move(context)) {}

const std::string* ParamReader::find(const std::string& key) {
  used_.push_back(key);
  const auto it = params_.find(key);
  return it == params_.end() ? nullptr : &it->second;
}

double ParamReader::number(const std::string& key) {
  if (auto v = optional_number(key)) return *v;
  throw ConfigError(context_ + ": missing required key '" + key + "'");
}

std::optional<double> ParamReader::optional_number(const std::string& key) {
  const std::string* s = find(key);
  if (!s) return std::nullopt;
  return parse_number(*s, context_ + ": key '" + key + "'");
}

int ParamReader::integer(const std::string& key) {
  if (auto v = optional_integer(key)) return *v;
  throw ConfigError(context_ + ": missing required key '" + key + "'");
}

std::optional<int> ParamReader::optional_integer(const std::string& key) {
  const auto v = optional_number(key);
  if (!v) return std::nullopt;
  if (*v != std::floor(*v) || std::abs(*v) > std::numeric_limits<int>::max())
    throw ConfigError(context_ + ": key '" + key + "' must be an integer");
  return static_cast<int>(*v);
}

std::string ParamReader::text(const std::string& key) {
  if (auto v = optional_text(key)) return *v;
  throw ConfigError(context_ + ": missing required key '" + key + "'");
}

std::optional<std::string> ParamReader::optional_text(const std::string& key) {
  const std::string* s = find(key);
  if (!s) return std::nullopt;
  return trim(*s);
}

std::vector<double> ParamReader::numbers(const std::string& key) {
  if (auto v = optional_numbers(key)) return *v;
  throw ConfigError(context_ + ": missing required key '" + key + "'");
}

std::optional<std::vector<double>> ParamReader::optional_numbers(const std::string& key) {
  const std::string* s = find(key);
  if (!s) return std::nullopt;
  std::vector<double> out;
  for (const std::string& w : split_list(*s)) out.push_back(parse_number(w, context_ + ": key '" + key + "'"));
  if (out.empty()) throw ConfigError(context_ + ": key '" + key + "' is empty");
  return out;
}

std::vector<std::string> ParamReader::words(const std::string& key) {
  const std::string* s = find(key);
  if (!s) throw ConfigError(context_ + ": missing required key '" + key + "'");
  return split_list(*s);
}

bool ParamReader::flag(const std::string& key, bool fallback) {
  const std::string* s = find(key);
  if (!s) return fallback;
  const std::string v = trim(*s);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(context_ + ": key '" + key + "' must be true or false");
}

void ParamReader::finish() const {
  for (const auto& [k, v] : params_)
    if (std::find(used_.begin(), used_.end(), k) == used_.end())
      throw ConfigError(context_ + ": unknown key '" + k + "'");
}

const SchemeEntry& ExperimentConfig::scheme(const std::string& n) const {
  for (const SchemeEntry& s : schemes)
    if (s.name == n || (n == "base" && s.name.empty())) return s;
  throw ConfigError("no [scheme" + (n.empty() ? std::string() : "." + n) + "] section");
}

const DataConfig& ExperimentConfig::field_data(const std::string& n) const {
  for (const DataConfig& d : data)
    if (d.name == n) return d;
  throw ConfigError("no [data." + n + "] section");
}

bool operator==(const FluxConfig& a, const FluxConfig& b) { return a.name == b.name && a.params == b.params; }
bool operator==(const GridConfig& a, const GridConfig& b) {
  return a.dim == b.dim && a.lo == b.lo && a.hi == b.hi && a.nx == b.nx && a.t_end == b.t_end &&
         a.store_every == b.store_every;
}
bool operator==(const SchemeEntry& a, const SchemeEntry& b) {
  return a.name == b.name && a.scheme == b.scheme && a.cfl == b.cfl && a.boundary == b.boundary &&
         a.viscosity == b.viscosity && a.viscosity_per_dx == b.viscosity_per_dx;
}
bool operator==(const DataConfig& a, const DataConfig& b) {
  return a.name == b.name && a.type == b.type && a.values == b.values;
}
bool operator==(const CheckConfig& a, const CheckConfig& b) {
  return a.name == b.name && a.kind == b.kind && a.params == b.params;
}
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.name == b.name && a.seed == b.seed && a.output_dir == b.output_dir && a.flux == b.flux &&
         a.grid == b.grid && a.schemes == b.schemes && a.data == b.data && a.checks == b.checks;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream os;
    os << source << ": line " << e.line() << ": " << e.message();
    throw ConfigError(os.str());
  }
  const LineIndex idx(text);
  ExperimentConfig cfg;
  bool seen_run = false, seen_flux = false, seen_grid = false;

  for (const auto& [section, node] : tree) {
    if (node.empty() && !node.data().empty())
      throw ConfigError(source + ": key '" + section + "' must belong to a section");
    const Params params = section_params(node);
    const std::string where = "[" + section + "]";

    if (section == "run") {
      seen_run = true;
      with_context(source, idx, section, [&] {
        ParamReader r(params, where);
        cfg.name = r.text("name");
        if (cfg.name.empty() || cfg.name.find('/') != std::string::npos)
          throw ConfigError(where + ": key 'name' must be a plain, non-empty name");
        const auto seed = r.optional_number("seed");
        if (seed && (*seed < 0 || *seed != std::floor(*seed))) throw ConfigError(where + ": key 'seed' must be a non-negative integer");
        cfg.seed = seed ? static_cast<std::uint64_t>(*seed) : 0;
        cfg.output_dir = r.optional_text("output_dir");
        r.finish();
      });
    } else if (section == "flux") {
      seen_flux = true;
      with_context(source, idx, section, [&] {
        ParamReader r(params, where);
        cfg.flux.name = r.text("name");
        for (const auto& [k, v] : params)
          if (k != "name") {
            cfg.flux.params[k] = v;
            r.number(k);
          }
        r.finish();
        try {
          make_flux(cfg.flux);
        } catch (const UnknownFlux& e) {
          throw ConfigError(where + ": key 'name': " + e.what());
        }
      });
    } else if (section == "grid") {
      seen_grid = true;
      with_context(source, idx, section, [&] {
        ParamReader r(params, where);
        cfg.grid.dim = r.integer("dim");
        cfg.grid.lo = r.number("lo");
        cfg.grid.hi = r.number("hi");
        cfg.grid.nx = r.integer("nx");
        cfg.grid.t_end = r.number("t_end");
        cfg.grid.store_every = r.integer("store_every");
        r.finish();
        if (cfg.grid.dim != 1 && cfg.grid.dim != 2) throw ConfigError(where + ": key 'dim' must be 1 or 2");
        if (!(cfg.grid.hi > cfg.grid.lo)) throw ConfigError(where + ": key 'hi' must exceed lo");
        if (cfg.grid.nx < 2) throw ConfigError(where + ": key 'nx' must be at least 2");
        if (!(cfg.grid.t_end > 0.0)) throw ConfigError(where + ": key 't_end' must be positive");
        if (cfg.grid.store_every < 1) throw ConfigError(where + ": key 'store_every' must be at least 1");
      });
    } else if (section == "scheme" || section.rfind("scheme.", 0) == 0) {
      with_context(source, idx, section, [&] {
        ParamReader r(params, where);
        SchemeEntry e;
        e.name = section == "scheme" ? "" : section.substr(7);
        if (section != "scheme" && (e.name.empty() || e.name == "base"))
          throw ConfigError(where + ": scheme variants need a name other than 'base'");
        e.scheme = scheme_from_string(r.text("type"));
        e.cfl = r.number("cfl");
        e.boundary = boundary_from_string(r.text("boundary"));
        e.viscosity = r.optional_number("viscosity");
        e.viscosity_per_dx = r.flag("viscosity_per_dx", false);
        r.finish();
        if (!(e.cfl > 0.0 && e.cfl <= 1.0)) throw ConfigError(where + ": key 'cfl' must lie in (0, 1]");
        if (e.scheme == Scheme::viscous && !e.viscosity)
          throw ConfigError(where + ": missing required key 'viscosity' for the viscous scheme");
        if (e.scheme != Scheme::viscous && (e.viscosity || params.count("viscosity_per_dx")))
          throw ConfigError(where + ": viscosity keys only apply to the viscous scheme");
        if (e.viscosity && *e.viscosity < 0.0) throw ConfigError(where + ": key 'viscosity' must be non-negative");
        if (e.name.empty()) cfg.schemes.insert(cfg.schemes.begin(), e);
        else cfg.schemes.push_back(e);
      });
    } else if (section.rfind("data.", 0) == 0) {
      with_context(source, idx, section, [&] {
        ParamReader r(params, where);
        DataConfig d;
        d.name = section.substr(5);
        if (d.name.empty()) throw ConfigError(where + ": data sections need a name");
        d.type = r.text("type");
        if (!kDataTypes.count(d.type)) throw ConfigError(where + ": key 'type': unknown initial data '" + d.type + "'");
        for (const std::string& k : data_keys(d.type)) {
          if (d.type == "file") d.values[k] = r.text(k);
          else d.values[k] = params.at(k), r.number(k);
        }
        r.finish();
        cfg.data.push_back(d);
      });
    } else if (section.rfind("check.", 0) == 0) {
      with_context(source, idx, section, [&] {
        CheckConfig c;
        c.name = section.substr(6);
        if (c.name.empty()) throw ConfigError(where + ": check sections need a name");
        const auto kind = params.find("kind");
        if (kind == params.end()) throw ConfigError(where + ": missing required key 'kind'");
        try {
          c.kind = check_kind_from_string(trim(kind->second));
        } catch (const ConfigError&) {
          throw ConfigError(where + ": key 'kind': unknown check kind '" + kind->second + "'");
        }
        for (const auto& [k, v] : params)
          if (k != "kind") c.params[k] = v;
        cfg.checks.push_back(c);
      });
    } else {
      throw ConfigError(source + ": " + idx.where(section) + ": unknown section");
    }
  }
  if (!seen_run) throw ConfigError(source + ": missing [run] section");
  if (!seen_flux) throw ConfigError(source + ": missing [flux] section");
  if (!seen_grid) throw ConfigError(source + ": missing [grid] section");
  if (cfg.schemes.empty() || !cfg.schemes.front().name.empty()) throw ConfigError(source + ": missing [scheme] section");

  const FluxSpec flux = make_flux(cfg.flux);
  if (flux.dim != cfg.grid.dim)
    throw ConfigError(source + ": " + idx.where("grid", "dim") + " does not match the dimension of flux " + flux.name);
  // Checks are validated against the whole config (fields, scheme names).
  for (const CheckConfig& c : cfg.checks) {
    const std::string section = "check." + c.name;
    with_context(source, idx, section, [&] { plan_check(c, cfg); });
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "[run]\nname = " << c.name << "\nseed = " << c.seed << "\n";
  if (c.output_dir) os << "output_dir = " << *c.output_dir << "\n";
  os << "\n[flux]\nname = " << c.flux.name << "\n";
  for (const auto& [k, v] : c.flux.params) os << k << " = " << v << "\n";
  os << "\n[grid]\ndim = " << c.grid.dim << "\nlo = " << fmt(c.grid.lo) << "\nhi = " << fmt(c.grid.hi)
     << "\nnx = " << c.grid.nx << "\nt_end = " << fmt(c.grid.t_end) << "\nstore_every = " << c.grid.store_every
     << "\n";
  for (const SchemeEntry& s : c.schemes) {
    os << "\n[scheme" << (s.name.empty() ? "" : "." + s.name) << "]\ntype = " << to_string(s.scheme)
       << "\ncfl = " << fmt(s.cfl) << "\nboundary = " << to_string(s.boundary) << "\n";
    if (s.viscosity) os << "viscosity = " << fmt(*s.viscosity) << "\n";
    if (s.viscosity_per_dx) os << "viscosity_per_dx = true\n";
  }
  for (const DataConfig& d : c.data) {
    os << "\n[data." << d.name << "]\ntype = " << d.type << "\n";
    for (const auto& [k, v] : d.values) os << k << " = " << v << "\n";
  }
  for (const CheckConfig& ch : c.checks) {
    os << "\n[check." << ch.name << "]\nkind = " << to_string(ch.kind) << "\n";
    for (const auto& [k, v] : ch.params) os << k << " = " << v << "\n";
  }
  return os.str();
}

FluxSpec make_flux(const FluxConfig& flux) {
  std::map<std::string, double> params;
  for (const auto& [k, v] : flux.params) params[k] = parse_number(v, "[flux] key '" + k + "'");
  return catalog_lookup(flux.name, params);
}

Grid make_grid(const GridConfig& g) { return Grid{g.dim, g.lo, g.hi, g.nx}; }

SchemeConfig make_scheme(const ExperimentConfig& config, const SchemeEntry& e) {
  SchemeConfig s;
  s.grid = make_grid(config.grid);
  s.scheme = e.scheme;
  s.cfl = e.cfl;
  s.boundary = e.boundary;
  s.t_end = config.grid.t_end;
  s.store_every = config.grid.store_every;
  s.viscosity = e.viscosity.value_or(0.0);
  s.viscosity_per_dx = e.viscosity_per_dx;
  return s;
}

InitialData make_initial_data(const DataConfig& d) {
  const std::string ctx = "[data." + d.name + "]";
  auto num = [&](const char* k) { return parse_number(d.values.at(k), ctx + " key '" + k + "'"); };
  if (d.type == "constant") return data::Constant{num("value")};
  if (d.type == "riemann") return data::Riemann{num("left"), num("right"), num("x0")};
  if (d.type == "box") return data::Box{num("height"), num("lo"), num("hi"), num("base")};
  if (d.type == "sine") return data::Sine{num("amp"), num("freq"), num("offset")};
  if (d.type == "file") return data::File{d.values.at("path")};
  throw ConfigError(ctx + ": unknown initial data '" + d.type + "'");
}

}  // namespace claw
