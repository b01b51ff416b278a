#include "claw/checks.hpp"

#include <algorithm>
#include <random>

#include "claw/error.hpp"

namespace claw {

namespace {

Point read_center(ParamReader& r, int dim) {
  Point c{};
  if (const auto v = r.optional_numbers("center")) {
    if (static_cast<int>(v->size()) != dim) throw ConfigError("key 'center' needs " + std::to_string(dim) + " values");
    for (int i = 0; i < dim; ++i) c[i] = (*v)[i];
  }
  return c;
}

TestFunctionSpec read_test(ParamReader& r, int dim) {
  TestFunctionSpec t;
  const std::string shape = r.text("test");
  t.center = read_center(r, dim);
  if (shape == "bump") {
    t.shape = TestFunctionSpec::Shape::bump;
    t.radius = r.number("radius");
    t.t_center = r.number("t_center");
    t.t_radius = r.number("t_radius");
    if (!(t.radius > 0.0 && t.t_radius > 0.0)) throw ConfigError("key 'radius' and 't_radius' must be positive");
  } else if (shape == "cone") {
    t.shape = TestFunctionSpec::Shape::cone;
    t.R = r.number("R");
    t.N = r.optional_number("N");
    t.rho = r.number("rho");
    t.tau = r.number("tau");
    t.h = r.number("h");
    t.eps = r.number("eps");
  } else {
    throw ConfigError("key 'test' must be bump or cone, got '" + shape + "'");
  }
  return t;
}

std::vector<std::string> read_fields(ParamReader& r, std::size_t count) {
  std::vector<std::string> f = r.words("fields");
  if (f.size() != count) throw ConfigError("key 'fields' needs " + std::to_string(count) + " names");
  return f;
}

CheckPlan plan(const CheckConfig& check, int dim, const ExperimentConfig* config) {
  CheckPlan p;
  p.source = check;
  Params params = check.params;
  // Field names default to the conventional u (and v).
  auto default_fields = [&](std::size_t count) {
    if (!params.count("fields")) params["fields"] = count == 1 ? "u" : "u v";
  };
  switch (check.kind) {
    case CheckKind::entropy_inequality: default_fields(1); break;
    case CheckKind::uniqueness: break;
    default: default_fields(2);
  }
  ParamReader r(params, "[check." + check.name + "]");

  switch (check.kind) {
    case CheckKind::entropy_inequality: {
      p.fields = read_fields(r, 1);
      p.test = read_test(r, dim);
      p.k0 = r.optional_number("k0");
      if (const auto n = r.optional_integer("k0_count")) p.k0_count = *n;
      if (params.count("smooth_n") && params.at("smooth_n") == "none") {
        r.optional_text("smooth_n");
        p.smooth_n.clear();
      } else if (const auto ns = r.optional_numbers("smooth_n")) {
        p.smooth_n.clear();
        for (double n : *ns) {
          if (n < 1 || n != std::floor(n)) throw ConfigError("key 'smooth_n' needs positive integers");
          p.smooth_n.push_back(static_cast<int>(n));
        }
      }
      p.weak.c_tol = r.optional_number("c_tol");
      if (p.k0_count < 2) throw ConfigError("key 'k0_count' must be at least 2");
      break;
    }
    case CheckKind::kato:
      p.fields = read_fields(r, 2);
      p.test = read_test(r, dim);
      p.weak.c_tol = r.optional_number("c_tol");
      break;
    case CheckKind::cone_contraction:
    case CheckKind::global_contraction:
      p.fields = read_fields(r, 2);
      if (check.kind == CheckKind::cone_contraction) {
        p.radius = r.number("radius");
        if (!(p.radius > 0.0)) throw ConfigError("key 'radius' must be positive");
      } else {
        p.radii = r.numbers("radii");
        if (p.radii.empty() || !(p.radii.front() > 0.0)) throw ConfigError("key 'radii' must be positive");
        for (std::size_t i = 1; i < p.radii.size(); ++i)
          if (!(p.radii[i] > p.radii[i - 1])) throw ConfigError("key 'radii' must be strictly increasing");
      }
      p.contraction.center = read_center(r, dim);
      p.contraction.c_tol = r.optional_number("c_tol");
      p.contraction.speed = r.optional_number("speed");
      p.contraction.bound = r.optional_number("bound");
      break;
    case CheckKind::uniqueness: {
      p.data_name = r.optional_text("data").value_or("u");
      p.schemes = r.words("schemes");
      if (p.schemes.empty()) throw ConfigError("key 'schemes' lists no scheme");
      for (const std::string& s : p.schemes) {
        p.fields.push_back(p.data_name + "@" + s);
        p.fields.push_back(p.data_name + "@" + s + "/fine");
      }
      p.uniqueness.radius = r.optional_number("radius");
      p.uniqueness.center = read_center(r, dim);
      if (const auto v = r.optional_number("required_ratio")) p.uniqueness.required_ratio = *v;
      if (const auto v = r.optional_number("required_oracle_ratio")) p.uniqueness.required_oracle_ratio = *v;
      if (const auto v = r.optional_numbers("riemann")) {
        if (v->size() != 3) throw ConfigError("key 'riemann' needs left, right, x0");
        p.riemann = data::Riemann{(*v)[0], (*v)[1], (*v)[2]};
      }
      break;
    }
    case CheckKind::doubling: {
      p.fields = read_fields(r, 2);
      p.eps = r.numbers("eps");
      const auto xs = r.optional_numbers("sample_x");
      const auto ys = r.optional_numbers("sample_y");
      const auto ts = r.optional_numbers("sample_t");
      const auto count = r.optional_integer("points");
      if (xs || ts) {
        if (!xs || !ts || xs->size() != ts->size() || (dim == 2 && (!ys || ys->size() != xs->size())))
          throw ConfigError("key 'sample_x' and 'sample_t' (and 'sample_y' in 2-d) need matching lengths");
        for (std::size_t i = 0; i < xs->size(); ++i)
          p.points.push_back({Point{(*xs)[i], dim == 2 ? (*ys)[i] : 0.0}, (*ts)[i]});
      } else if (count) {
        p.random_points = *count;
        if (p.random_points < 1) throw ConfigError("key 'points' must be positive");
        p.x_lo = r.number("x_lo");
        p.x_hi = r.number("x_hi");
        p.t_lo = r.number("t_lo");
        p.t_hi = r.number("t_hi");
      } else {
        throw ConfigError("missing required key 'points' (or explicit 'sample_x' and 'sample_t')");
      }
      p.doubling.lip_estimate = r.optional_number("lip_estimate");
      for (std::size_t i = 1; i < p.eps.size(); ++i)
        if (!(p.eps[i] < p.eps[i - 1])) throw ConfigError("key 'eps' must be decreasing");
      break;
    }
  }
  r.finish();

  if (config) {
    if (check.kind == CheckKind::uniqueness) {
      const DataConfig& d = config->field_data(p.data_name);
      for (const std::string& s : p.schemes) config->scheme(s);
      if (!p.riemann && d.type == "riemann") {
        const InitialData id = make_initial_data(d);
        p.riemann = std::get<data::Riemann>(id);
      }
    } else {
      for (const std::string& f : p.fields) config->field_data(f);
    }
  }
  return p;
}

TestFunction build_test(const TestFunctionSpec& t, int dim, const FluxSpec& flux, const GridField& u) {
  if (t.shape == TestFunctionSpec::Shape::bump) return bump_test_function(dim, t.center, t.radius, t.t_center, t.t_radius);
  const double N = t.N.value_or(lipschitz_constant(flux, t.R, u.bound_M));
  const ConeSpec cone = make_cone(dim, t.R, N, u.times.back(), t.center);
  return contraction_test_function(cone, t.rho, t.tau, t.h, t.eps);
}

void note_test(ResidualReport& rep, const TestFunctionSpec& t, const TestFunction& phi) {
  rep.note("test", t.shape == TestFunctionSpec::Shape::bump ? "bump" : "cone");
  rep.note("test_lipschitz", phi.lipschitz);
  if (t.shape == TestFunctionSpec::Shape::cone) {
    rep.note("R", t.R);
    rep.note("rho", t.rho);
    rep.note("tau", t.tau);
    rep.note("h", t.h);
    rep.note("eps", t.eps);
  } else {
    rep.note("radius", t.radius);
    rep.note("t_center", t.t_center);
    rep.note("t_radius", t.t_radius);
  }
}

}  // namespace

CheckPlan plan_check(const CheckConfig& check, const ExperimentConfig& config) {
  return plan(check, config.grid.dim, &config);
}

CheckPlan plan_check(const CheckConfig& check, int dim) { return plan(check, dim, nullptr); }

CheckOutcome evaluate_check(const CheckPlan& p, const FluxSpec& flux, const FieldLookup& field, std::uint64_t seed) {
  CheckOutcome out;
  const int dim = flux.dim;
  switch (p.source.kind) {
    case CheckKind::entropy_inequality: {
      const GridField& u = field(p.fields[0]);
      const TestFunction phi = build_test(*p.test, dim, flux, u);
      std::vector<EntropyPair> pairs;
      if (p.k0) {
        pairs.push_back(make_kruzkov_pair(flux, *p.k0));
      } else {
        pairs = entropy_sweep(flux, u.bound_M, p.k0_count, p.smooth_n);
      }
      out.report = entropy_sweep_residual(u, flux, pairs, phi, p.weak);
      note_test(out.report, *p.test, phi);
      break;
    }
    case CheckKind::kato: {
      const GridField& u = field(p.fields[0]);
      const TestFunction psi = build_test(*p.test, dim, flux, u);
      out.report = kato_lhs(u, field(p.fields[1]), flux, psi, p.weak);
      note_test(out.report, *p.test, psi);
      break;
    }
    case CheckKind::cone_contraction: {
      ConeProfile prof = cone_contraction_profile(field(p.fields[0]), field(p.fields[1]), flux, p.radius, p.contraction);
      out.report = prof.report;
      out.profile = std::move(prof.rows);
      break;
    }
    case CheckKind::global_contraction: {
      GlobalContraction g = global_contraction_check(field(p.fields[0]), field(p.fields[1]), flux, p.radii, p.contraction);
      out.report = g.report;
      out.profile = std::move(g.rows);
      break;
    }
    case CheckKind::uniqueness: {
      std::vector<GridField> coarse, fine;
      for (std::size_t i = 0; i < p.schemes.size(); ++i) {
        coarse.push_back(field(p.fields[2 * i]));
        fine.push_back(field(p.fields[2 * i + 1]));
      }
      out.uniqueness = uniqueness_from_fields(flux, coarse, fine, p.schemes, p.riemann, p.uniqueness);
      out.report = out.uniqueness->report;
      break;
    }
    case CheckKind::doubling: {
      std::vector<SamplePoint> points = p.points;
      if (p.random_points > 0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> X(p.x_lo, p.x_hi), T(p.t_lo, p.t_hi);
        for (int i = 0; i < p.random_points; ++i) {
          SamplePoint s;
          for (int a = 0; a < dim; ++a) s.x[a] = X(rng);
          s.t = T(rng);
          points.push_back(s);
        }
      }
      out.doubling = doubling_diagnostics(field(p.fields[0]), field(p.fields[1]), flux, p.eps, points, p.doubling);
      out.report = out.doubling->report;
      if (p.random_points > 0) out.report.note("seed", std::to_string(seed));
      break;
    }
  }
  out.report.note("check", p.source.name);
  return out;
}

}  // namespace claw
