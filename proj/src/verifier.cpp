#include "claw/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "claw/error.hpp"
#include "claw/quadrature.hpp"

namespace claw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Per-cell integrand pieces of a divergence-form weak integral:
//   density * dt phi + flux . grad phi + source * phi.
struct CellTerms {
  double density = 0.0;
  Point flux{};
  double source = 0.0;
};

using TermsFn = std::function<CellTerms(const Point& x, std::size_t level, std::size_t cell)>;

void require_inside(const GridField& u, const SupportBox& box) {
  const double slack = 1e-12 * std::max(1.0, u.grid.hi - u.grid.lo);
  for (int i = 0; i < box.dim; ++i)
    if (box.lo[i] < u.grid.lo - slack || box.hi[i] > u.grid.hi + slack)
      throw SupportExceedsDomain("test-function support leaves the spatial domain");
  const double tslack = 1e-12 * std::max(1.0, u.times.back());
  if (u.levels() < 2 || box.t_lo < u.times.front() - tslack || box.t_hi > u.times.back() + tslack)
    throw MissingTimeLevels("stored levels do not cover the test-function support in time");
}

struct WeakIntegral {
  std::vector<double> values;
  double max_dt = 0.0;
};

// Integrates every term function against phi over the stored slabs.
WeakIntegral weak_form(const GridField& u, const TestFunction& phi, const std::vector<TermsFn>& terms) {
  require_inside(u, phi.support);
  const Grid& g = u.grid;
  const double dx = g.dx();
  const double vol = g.cell_volume();
  const double face_area = vol / dx;
  const SupportBox& box = phi.support;

  std::vector<std::size_t> cells;
  for (std::size_t c = 0; c < g.cells(); ++c) {
    const Point x = g.center(c);
    bool inside = true;
    for (int i = 0; i < g.dim; ++i) inside = inside && x[i] >= box.lo[i] - dx && x[i] <= box.hi[i] + dx;
    if (inside) cells.push_back(c);
  }

  WeakIntegral out;
  out.values.assign(terms.size(), 0.0);
  std::vector<double> phi_lo(cells.size()), phi_hi(cells.size());
  bool have_lo = false;
  for (std::size_t n = 0; n + 1 < u.levels(); ++n) {
    const double t0 = u.times[n], t1 = u.times[n + 1];
    if (t1 <= box.t_lo || t0 >= box.t_hi) {
      have_lo = false;
      continue;
    }
    const double dt = t1 - t0;
    const double tm = 0.5 * (t0 + t1);
    out.max_dt = std::max(out.max_dt, dt);
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const Point x = g.center(cells[k]);
      if (!have_lo) phi_lo[k] = phi.value(x, t0);
      phi_hi[k] = phi.value(x, t1);
    }
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const Point x = g.center(cells[k]);
      const double dphi_t = phi_hi[k] - phi_lo[k];
      Point dphi_x{};
      for (int a = 0; a < g.dim; ++a) {
        const Point e = (0.5 * dx) * unit(a);
        dphi_x[a] = phi.value(x + e, tm) - phi.value(x - e, tm);
      }
      const double phi_mid = phi.value(x, tm);
      if (dphi_t == 0.0 && dphi_x[0] == 0.0 && dphi_x[1] == 0.0 && phi_mid == 0.0) continue;
      for (std::size_t j = 0; j < terms.size(); ++j) {
        const CellTerms ct = terms[j](x, n, cells[k]);
        out.values[j] += vol * dphi_t * ct.density + dt * face_area * dot(dphi_x, ct.flux) +
                         dt * vol * phi_mid * ct.source;
      }
    }
    std::swap(phi_lo, phi_hi);
    have_lo = true;
  }
  return out;
}

double box_measure(const SupportBox& b) {
  double m = b.t_hi - b.t_lo;
  for (int i = 0; i < b.dim; ++i) m *= b.hi[i] - b.lo[i];
  return m;
}

TermsFn pair_terms(const GridField& u, const FluxSpec& flux, const EntropyPair& pair) {
  // x-independent fluxes: memoize on the state, the smooth pairs are quadratures.
  auto cache = std::make_shared<std::unordered_map<double, CellTerms>>();
  return [&u, &flux, pair, cache](const Point& x, std::size_t n, std::size_t c) {
    const double val = u.data[n][c];
    if (flux.homogeneous) {
      if (auto it = cache->find(val); it != cache->end()) return it->second;
    }
    CellTerms t;
    t.density = pair.eta(val);
    t.flux = pair.q(x, val);
    if (!flux.homogeneous) {
      const Point xs = avoid_singular(flux, x);
      t.source = pair.div_x_q(xs, val) - pair.eta_prime(val) * flux.div_x(xs, val);
    }
    if (flux.homogeneous) cache->emplace(val, t);
    return t;
  };
}

double default_weak_c(const TestFunction& phi, double bound) { return 10.0 * phi.lipschitz * bound; }

double contraction_c(const ContractionOptions& opts, int dim, double bound, double radius) {
  if (opts.c_tol) return *opts.c_tol;
  const double boundary = dim == 1 ? 2.0 : 2.0 * std::numbers::pi * radius;
  return 2.0 * bound * boundary;
}

double max_spacing(const std::vector<double>& times) {
  double m = 0.0;
  for (std::size_t n = 0; n + 1 < times.size(); ++n) m = std::max(m, times[n + 1] - times[n]);
  return m;
}

Point kruzkov_q(const FluxSpec& flux, const Point& x, double a, double b) {
  const double s = sign(a - b);
  const Point fa = flux.eval(x, a), fb = flux.eval(x, b);
  return Point{s * (fa[0] - fb[0]), s * (fa[1] - fb[1])};
}

}  // namespace

std::string to_string(CheckKind k) {
  switch (k) {
    case CheckKind::entropy_inequality: return "entropy_inequality";
    case CheckKind::kato: return "kato";
    case CheckKind::cone_contraction: return "cone_contraction";
    case CheckKind::global_contraction: return "global_contraction";
    case CheckKind::uniqueness: return "uniqueness";
    case CheckKind::doubling: return "doubling";
  }
  return "?";
}

CheckKind check_kind_from_string(const std::string& s) {
  for (CheckKind k : {CheckKind::entropy_inequality, CheckKind::kato, CheckKind::cone_contraction,
                      CheckKind::global_contraction, CheckKind::uniqueness, CheckKind::doubling})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown check kind '" + s + "'");
}

void ResidualReport::note(const std::string& key, double v) { metadata[key] = fmt(v); }

std::string ResidualReport::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = to_string(kind);
  j["value"] = value;
  j["tolerance"] = tolerance;
  j["passed"] = passed;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metadata) meta[k] = v;
  j["metadata"] = meta;
  return j.dump(2);
}

ResidualReport entropy_residual(const GridField& u, const FluxSpec& flux, const EntropyPair& pair,
                                const TestFunction& phi, WeakFormOptions opts) {
  return entropy_sweep_residual(u, flux, {pair}, phi, opts);
}

ResidualReport entropy_sweep_residual(const GridField& u, const FluxSpec& flux,
                                      const std::vector<EntropyPair>& pairs, const TestFunction& phi,
                                      WeakFormOptions opts) {
  std::vector<TermsFn> terms;
  for (const EntropyPair& p : pairs) terms.push_back(pair_terms(u, flux, p));
  const WeakIntegral w = weak_form(u, phi, terms);
  ResidualReport r;
  r.kind = CheckKind::entropy_inequality;
  std::size_t worst = 0;
  for (std::size_t j = 1; j < w.values.size(); ++j)
    if (w.values[j] < w.values[worst]) worst = j;
  r.value = w.values.at(worst);
  const double c = opts.c_tol.value_or(default_weak_c(phi, u.bound_M));
  r.tolerance = c * (u.grid.dx() + w.max_dt) * box_measure(phi.support);
  r.passed = r.value >= -r.tolerance;
  r.note("flux", flux.name);
  r.note("pairs", static_cast<double>(pairs.size()));
  r.note("worst_pair", pairs[worst].label());
  r.note("c_tol", c);
  r.note("dx", u.grid.dx());
  r.note("dt", w.max_dt);
  r.note("nx", static_cast<double>(u.grid.nx));
  std::ostringstream all;
  for (std::size_t j = 0; j < w.values.size(); ++j) all << (j ? ";" : "") << pairs[j].label() << "=" << fmt(w.values[j]);
  r.note("residuals", all.str());
  return r;
}

ResidualReport kato_lhs(const GridField& u, const GridField& v, const FluxSpec& flux, const TestFunction& psi,
                        WeakFormOptions opts) {
  require_compatible(u, v);
  const TermsFn terms = [&](const Point& x, std::size_t n, std::size_t c) {
    const double a = u.data[n][c], b = v.data[n][c];
    CellTerms t;
    t.density = std::abs(a - b);
    t.flux = kruzkov_q(flux, x, a, b);
    return t;
  };
  const WeakIntegral w = weak_form(u, psi, {terms});
  ResidualReport r;
  r.kind = CheckKind::kato;
  r.value = w.values[0];
  const double bound = std::max(u.bound_M, v.bound_M);
  const double c = opts.c_tol.value_or(default_weak_c(psi, bound));
  r.tolerance = c * (u.grid.dx() + w.max_dt) * box_measure(psi.support);
  r.passed = r.value >= -r.tolerance;
  r.note("flux", flux.name);
  r.note("c_tol", c);
  r.note("dx", u.grid.dx());
  r.note("dt", w.max_dt);
  return r;
}

double positive_increment(double value, double scale) {
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(scale);
  return value > floor ? value : 0.0;
}

ConeProfile cone_contraction_profile(const GridField& u, const GridField& v, const FluxSpec& flux, double radius,
                                     ContractionOptions opts) {
  require_compatible(u, v);
  const double bound = opts.bound.value_or(std::max(u.bound_M, v.bound_M));
  const double speed = opts.speed.value_or(lipschitz_constant(flux, radius, bound));
  if (radius - u.times.front() * speed <= 0.0) throw EmptyCone("cone is empty at the first stored level");

  ConeProfile out;
  double excess = -kInf;
  for (std::size_t n = 0; n < u.levels(); ++n) {
    const double t = u.times[n];
    const double r = radius - t * speed;
    if (r <= 0.0) break;
    out.rows.push_back({t, r, l1_distance_on_ball(u, v, t, opts.center, r)});
    // |x/|x| . q(x,u,v)| <= N |u - v| at every node of the ball.
    for (std::size_t c = 0; c < u.grid.cells(); ++c) {
      const Point rel = u.grid.center(c) - opts.center;
      const double d = norm(rel);
      if (d == 0.0 || d > r) continue;
      const double a = u.data[n][c], b = v.data[n][c];
      const Point q = kruzkov_q(flux, u.grid.center(c), a, b);
      excess = std::max(excess, std::abs(dot(rel, q)) / d - speed * std::abs(a - b));
    }
  }
  double worst = -kInf;
  for (std::size_t n = 0; n + 1 < out.rows.size(); ++n)
    worst = std::max(worst, out.rows[n + 1].l1_mass - out.rows[n].l1_mass);
  if (out.rows.size() < 2) worst = 0.0;

  ResidualReport& rep = out.report;
  rep.kind = CheckKind::cone_contraction;
  rep.value = worst;
  const double c = contraction_c(opts, u.grid.dim, bound, radius);
  const double dt = max_spacing(u.times);
  rep.tolerance = c * (u.grid.dx() + dt);
  rep.passed = rep.value <= rep.tolerance;
  rep.note("flux", flux.name);
  rep.note("R", radius);
  rep.note("N", speed);
  rep.note("M", bound);
  rep.note("c_tol", c);
  rep.note("dx", u.grid.dx());
  rep.note("dt", dt);
  rep.note("levels_in_cone", static_cast<double>(out.rows.size()));
  double scale = 0.0;
  for (const ProfileRow& row : out.rows) scale = std::max(scale, row.l1_mass);
  rep.note("positive_increment", positive_increment(worst, scale));
  rep.note("flux_bound_excess", excess);
  return out;
}

GlobalContraction global_contraction_check(const GridField& u, const GridField& v, const FluxSpec& flux,
                                           const std::vector<double>& radii, ContractionOptions opts) {
  require_compatible(u, v);
  if (radii.empty()) throw ConfigError("global contraction needs at least one radius");
  const double bound = opts.bound.value_or(std::max(u.bound_M, v.bound_M));
  GlobalContraction out;
  out.radii = radii;
  for (double r : radii) {
    const double speed = opts.speed.value_or(lipschitz_constant(flux, r, bound));
    out.speed_over_radius.push_back(speed / r);
  }
  bool hypothesis = true;
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    if (radii[i + 1] <= radii[i]) throw ConfigError("radii must be increasing");
    hypothesis = hypothesis && out.speed_over_radius[i + 1] <= out.speed_over_radius[i];
  }
  hypothesis = hypothesis && (out.speed_over_radius.back() < out.speed_over_radius.front() ||
                              out.speed_over_radius.back() == 0.0);

  double running_min = kInf;
  double worst = 0.0;
  for (std::size_t n = 0; n < u.levels(); ++n) {
    const double d = l1_distance(u, v, n);
    out.rows.push_back({u.times[n], kInf, d});
    running_min = std::min(running_min, d);
    worst = std::max(worst, d - running_min);
  }

  ResidualReport& rep = out.report;
  rep.kind = CheckKind::global_contraction;
  rep.value = worst;
  const double c = contraction_c(opts, u.grid.dim, bound, radii.back());
  const double dt = max_spacing(u.times);
  rep.tolerance = c * (u.grid.dx() + dt);
  rep.passed = hypothesis && rep.value <= rep.tolerance;
  std::ostringstream seq;
  for (std::size_t i = 0; i < radii.size(); ++i) seq << (i ? "," : "") << fmt(out.speed_over_radius[i]);
  rep.note("flux", flux.name);
  double scale = 0.0;
  for (const ProfileRow& row : out.rows) scale = std::max(scale, row.l1_mass);
  rep.note("positive_increment", positive_increment(worst, scale));
  rep.note("N_over_R", seq.str());
  rep.note("hypothesis_holds", hypothesis ? "true" : "false");
  rep.note("M", bound);
  rep.note("c_tol", c);
  rep.note("dx", u.grid.dx());
  rep.note("dt", dt);
  return out;
}

namespace {

double final_distance(const Grid& g, const std::vector<double>& a, const std::vector<double>& b,
                      const Point& center, double radius) {
  double sum = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c)
    if (norm(g.center(c) - center) <= radius) sum += std::abs(a[c] - b[c]);
  return sum * g.cell_volume();
}

std::string seed_label(const SchemeConfig& c) {
  std::ostringstream os;
  os << to_string(c.scheme) << "(cfl=" << c.cfl;
  if (c.scheme == Scheme::viscous) os << ",eps=" << c.viscosity << (c.viscosity_per_dx ? "dx" : "");
  os << ")";
  return os.str();
}

double ratio(double coarse, double fine) {
  if (fine == 0.0) return kInf;
  return coarse / fine;
}

}  // namespace

UniquenessResult uniqueness_experiment(const FluxSpec& flux, const InitialData& u0,
                                       const std::vector<SchemeConfig>& seeds, UniquenessOptions opts) {
  if (seeds.empty()) throw ConfigError("uniqueness experiment needs at least one configuration");
  for (const SchemeConfig& s : seeds) {
    if (!s.grid.same_as(seeds.front().grid)) throw GridMismatch("uniqueness seeds must share the grid");
    if (s.t_end != seeds.front().t_end) throw ConfigError("uniqueness seeds must share t_end");
  }
  std::vector<GridField> coarse, fine;
  std::vector<std::string> labels;
  for (const SchemeConfig& s : seeds) {
    labels.push_back(seed_label(s));
    coarse.push_back(solve(flux, u0, s));
    fine.push_back(solve(flux, u0, s.refined()));
  }
  std::optional<data::Riemann> oracle;
  if (const auto* r = std::get_if<data::Riemann>(&u0)) oracle = *r;
  return uniqueness_from_fields(flux, coarse, fine, std::move(labels), oracle, opts);
}

UniquenessResult uniqueness_from_fields(const FluxSpec& flux, const std::vector<GridField>& coarse,
                                        const std::vector<GridField>& fine, std::vector<std::string> labels,
                                        std::optional<data::Riemann> riemann, UniquenessOptions opts) {
  if (coarse.empty() || coarse.size() != fine.size())
    throw ConfigError("uniqueness needs one coarse and one fine field per variant");
  const Grid gc = coarse.front().grid;
  const Grid gf = fine.front().grid;
  if (!gf.same_as(gc.refined())) throw GridMismatch("fine fields must be the dx/2 refinement of the coarse ones");
  const double t_end = coarse.front().times.back();
  double bound = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    if (!coarse[i].grid.same_as(gc) || !fine[i].grid.same_as(gf)) throw GridMismatch("uniqueness variants must share the grid");
    const double slack = 1e-12 * std::max(1.0, t_end);
    if (std::abs(coarse[i].times.back() - t_end) > slack || std::abs(fine[i].times.back() - t_end) > slack)
      throw ConfigError("uniqueness variants must share t_end");
    bound = std::max({bound, coarse[i].bound_M, fine[i].bound_M});
  }
  while (labels.size() < coarse.size()) labels.push_back("variant" + std::to_string(labels.size()));

  UniquenessResult out;
  out.labels = std::move(labels);
  double r = kInf;
  if (opts.radius) {
    const double speed = lipschitz_constant(flux, *opts.radius, bound);
    r = *opts.radius - t_end * speed;
    if (r <= 0.0) throw EmptyCone("comparison cone is empty at t_end");
  }
  double worst_ratio = kInf;
  for (std::size_t i = 0; i < coarse.size(); ++i)
    for (std::size_t j = i + 1; j < coarse.size(); ++j) {
      const double dc = final_distance(gc, coarse[i].data.back(), coarse[j].data.back(), opts.center, r);
      const double df = final_distance(gf, fine[i].data.back(), fine[j].data.back(), opts.center, r);
      out.coarse_distances.push_back(dc);
      out.fine_distances.push_back(df);
      out.ratios.push_back(ratio(dc, df));
      worst_ratio = std::min(worst_ratio, out.ratios.back());
    }

  const bool oracle = riemann.has_value() && flux.name == "burgers1d";
  double worst_oracle = kInf;
  if (oracle) {
    auto exact = [&](const Grid& g) {
      return riemann_field(g, riemann->left, riemann->right, riemann->x0, {t_end}).data.front();
    };
    const std::vector<double> ec = exact(gc), ef = exact(gf);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      out.oracle_coarse.push_back(final_distance(gc, coarse[i].data.back(), ec, opts.center, r));
      out.oracle_fine.push_back(final_distance(gf, fine[i].data.back(), ef, opts.center, r));
      out.oracle_ratios.push_back(ratio(out.oracle_coarse.back(), out.oracle_fine.back()));
      worst_oracle = std::min(worst_oracle, out.oracle_ratios.back());
    }
  }

  ResidualReport& rep = out.report;
  rep.kind = CheckKind::uniqueness;
  rep.value = worst_ratio;
  rep.tolerance = opts.required_ratio;
  rep.passed = rep.value >= opts.required_ratio && (!oracle || worst_oracle >= opts.required_oracle_ratio);
  rep.note("flux", flux.name);
  rep.note("t_end", t_end);
  rep.note("nx_coarse", static_cast<double>(gc.nx));
  rep.note("comparison_radius", r);
  std::ostringstream labels_os, dist;
  for (std::size_t i = 0; i < out.labels.size(); ++i) labels_os << (i ? ";" : "") << out.labels[i];
  for (std::size_t i = 0; i < out.ratios.size(); ++i)
    dist << (i ? ";" : "") << fmt(out.coarse_distances[i]) << "->" << fmt(out.fine_distances[i]);
  rep.note("variants", labels_os.str());
  rep.note("pairwise_distances", dist.str());
  if (oracle) {
    std::ostringstream errs;
    for (std::size_t i = 0; i < out.oracle_ratios.size(); ++i)
      errs << (i ? ";" : "") << fmt(out.oracle_coarse[i]) << "->" << fmt(out.oracle_fine[i]);
    rep.note("oracle_errors", errs.str());
    rep.note("oracle_min_ratio", worst_oracle);
    rep.note("oracle_required_ratio", opts.required_oracle_ratio);
  }
  return out;
}

DoublingTable doubling_diagnostics(const GridField& u, const GridField& v, const FluxSpec& flux,
                                   const std::vector<double>& eps_list, const std::vector<SamplePoint>& points,
                                   DoublingOptions opts) {
  require_compatible(u, v);
  if (eps_list.empty()) throw ConfigError("doubling diagnostics need at least one eps");
  const Grid& g = u.grid;
  const int dim = g.dim;
  const double dx = g.dx();
  const double eps_max = *std::max_element(eps_list.begin(), eps_list.end());

  double lip = 0.0;
  if (opts.lip_estimate) {
    lip = *opts.lip_estimate;
  } else {
    for (const GridField* f : {&u, &v}) {
      const auto& s = f->data.front();
      for (std::size_t c = 0; c < s.size(); ++c) {
        const int i = static_cast<int>(dim == 1 ? c : c % g.nx);
        const int j = static_cast<int>(dim == 1 ? 0 : c / g.nx);
        if (i + 1 < g.nx) lip = std::max(lip, std::abs(s[c + 1] - s[c]) / dx);
        if (dim == 2 && j + 1 < g.nx) lip = std::max(lip, std::abs(s[c + g.nx] - s[c]) / dx);
      }
    }
  }
  const double threshold = 10.0 * dx * lip;

  // Time slabs: level n carries [mid(t_{n-1}, t_n), mid(t_n, t_{n+1})].
  std::vector<double> slab_lo(u.levels()), slab_hi(u.levels());
  for (std::size_t n = 0; n < u.levels(); ++n) {
    slab_lo[n] = n == 0 ? u.times[0] : 0.5 * (u.times[n - 1] + u.times[n]);
    slab_hi[n] = n + 1 == u.levels() ? u.times[n] : 0.5 * (u.times[n] + u.times[n + 1]);
  }

  // 8 Gauss-Legendre nodes per cell and axis.
  const auto rule = quad::gauss_legendre(8);
  auto cell_nodes = [&](double a, double b, std::vector<std::pair<double, double>>& out) {
    out.clear();
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    for (const auto& [z, w] : rule) out.emplace_back(m + h * z, h * w);
  };

  DoublingTable table;
  for (double eps : eps_list) {
    const Mollifier rho(dim, eps);
    std::array<double, 4> worst{0, 0, 0, 0};
    for (std::size_t p = 0; p < points.size(); ++p) {
      const SamplePoint& sp = points[p];
      // Level whose time slab contains t.
      const auto above = std::upper_bound(slab_lo.begin(), slab_lo.end(), sp.t) - slab_lo.begin();
      const std::size_t m = static_cast<std::size_t>(std::max<std::ptrdiff_t>(above - 1, 0));
      // The sample is snapped to its cell centre and stored level.
      const double tc = u.times[m];
      if (tc - eps < u.times.front() || tc + eps > u.times.back())
        throw MissingTimeLevels("stored levels do not cover [t - eps, t + eps]");
      int idx[2] = {0, 0};
      for (int a = 0; a < dim; ++a) {
        if (sp.x[a] - eps_max < g.lo || sp.x[a] + eps_max > g.hi)
          throw SupportExceedsDomain("mollifier ball leaves the domain");
        idx[a] = std::clamp(static_cast<int>(std::floor((sp.x[a] - g.lo) / dx)), 0, g.nx - 1);
      }
      const std::size_t cell = dim == 1 ? std::size_t(idx[0]) : std::size_t(idx[1]) * g.nx + idx[0];
      const Point xc = g.center(cell);
      const Point xs = avoid_singular(flux, xc);

      // Jump detector over the eps_max neighbourhood.
      const int reach = static_cast<int>(std::ceil(eps_max / dx)) + 1;
      for (std::size_t n = 0; n < u.levels(); ++n) {
        if (std::abs(u.times[n] - tc) > eps_max + (slab_hi[n] - slab_lo[n])) continue;
        for (const GridField* f : {&u, &v}) {
          const auto& s = f->data[n];
          for (int dj = (dim == 2 ? -reach : 0); dj <= (dim == 2 ? reach : 0); ++dj)
            for (int di = -reach; di <= reach; ++di) {
              const int i = idx[0] + di, j = idx[1] + dj;
              if (i < 0 || i >= g.nx || j < 0 || j >= (dim == 2 ? g.nx : 1)) continue;
              const std::size_t c = dim == 1 ? std::size_t(i) : std::size_t(j) * g.nx + i;
              double jump = 0.0;
              if (i + 1 < g.nx) jump = std::max(jump, std::abs(s[c + 1] - s[c]));
              if (dim == 2 && j + 1 < g.nx) jump = std::max(jump, std::abs(s[c + g.nx] - s[c]));
              if (jump > threshold) {
                std::ostringstream os;
                os << "jump " << jump << " > " << threshold << " near sample " << p;
                throw SampleNearShock(os.str());
              }
            }
        }
      }

      const double uval = u.data[m][cell];
      const double vloc = v.data[m][cell];
      DoublingRow row;
      row.eps = eps;
      row.point = p;
      Point i2{};
      double i1 = 0.0, i3 = 0.0, i4 = 0.0;

      const int span = static_cast<int>(std::ceil(eps / dx)) + 1;
      std::vector<std::pair<double, double>> nx_nodes, ny_nodes;
      for (int dj = (dim == 2 ? -span : 0); dj <= (dim == 2 ? span : 0); ++dj)
        for (int di = -span; di <= span; ++di) {
          const int i = idx[0] + di, j = idx[1] + dj;
          if (i < 0 || i >= g.nx || j < 0 || j >= (dim == 2 ? g.nx : 1)) continue;
          const std::size_t c = dim == 1 ? std::size_t(i) : std::size_t(j) * g.nx + i;
          const Point yc = g.center(c);
          cell_nodes(yc[0] - 0.5 * dx, yc[0] + 0.5 * dx, nx_nodes);
          if (dim == 2) cell_nodes(yc[1] - 0.5 * dx, yc[1] + 0.5 * dx, ny_nodes);
          else ny_nodes.assign(1, {0.0, 1.0});
          // Spatial node data for this cell.
          struct Node {
            Point y;
            double w;
            double rho;
            Point grad_y;
          };
          std::vector<Node> nodes;
          double cell_weight = 0.0;
          for (const auto& [yy, wy] : ny_nodes)
            for (const auto& [yx, wx] : nx_nodes) {
              const Point y{yx, dim == 2 ? yy : 0.0};
              const double r = rho(xc - y);
              const Point gy = (-1.0) * rho.gradient(xc - y);
              if (r == 0.0 && gy[0] == 0.0 && gy[1] == 0.0) continue;
              nodes.push_back({y, wx * wy, r, gy});
              cell_weight += wx * wy * r;
            }
          if (nodes.empty()) continue;
          for (std::size_t n = 0; n < u.levels(); ++n) {
            const double wt = alpha(eps, tc - slab_lo[n]) - alpha(eps, tc - slab_hi[n]);
            if (wt == 0.0) continue;
            const double vt = v.data[n][c];
            const double s = sign(uval - vt);
            i1 += wt * cell_weight * std::abs(uval - vt);
            const Point qx = kruzkov_q(flux, xc, uval, vt);
            i2 = i2 + (wt * cell_weight) * qx;
            const double divv_x = flux.div_x(xs, vt);
            double a3 = 0.0, a4 = 0.0;
            for (const Node& nd : nodes) {
              const Point ys = avoid_singular(flux, nd.y);
              a3 += nd.w * nd.rho * s * (flux.div_x(ys, uval) - divv_x);
              const Point qy = kruzkov_q(flux, nd.y, uval, vt);
              a4 += nd.w * dot(nd.grad_y, qy - qx);
            }
            i3 += wt * a3;
            i4 += wt * a4;
          }
        }
      const Point q_lim = kruzkov_q(flux, xc, uval, vloc);
      const double div_lim = sign(uval - vloc) * (flux.div_x(xs, uval) - flux.div_x(xs, vloc));
      row.integrals[0] = i1;
      row.integrals[1] = norm(i2);
      row.integrals[2] = i3;
      row.integrals[3] = i4;
      row.limits[0] = std::abs(uval - vloc);
      row.limits[1] = norm(q_lim);
      row.limits[2] = div_lim;
      row.limits[3] = -div_lim;
      row.deviations[0] = std::abs(i1 - row.limits[0]);
      row.deviations[1] = norm(i2 - q_lim);
      row.deviations[2] = std::abs(i3 - div_lim);
      row.deviations[3] = std::abs(i4 + div_lim);
      for (int k = 0; k < 4; ++k) worst[k] = std::max(worst[k], row.deviations[k]);
      table.rows.push_back(row);
    }
    table.max_deviation.push_back(worst);
  }

  bool monotone = true;
  double value = -kInf;
  for (std::size_t e = 0; e + 1 < table.max_deviation.size(); ++e)
    for (int k = 0; k < 4; ++k) {
      const double inc = table.max_deviation[e + 1][k] - table.max_deviation[e][k];
      value = std::max(value, inc);
      monotone = monotone && inc <= opts.monotone_slack;
    }
  if (table.max_deviation.size() < 2) value = 0.0;
  ResidualReport& rep = table.report;
  rep.kind = CheckKind::doubling;
  rep.value = value;
  rep.tolerance = opts.monotone_slack;
  rep.passed = monotone;
  rep.note("flux", flux.name);
  rep.note("points", static_cast<double>(points.size()));
  rep.note("jump_threshold", threshold);
  for (std::size_t e = 0; e < table.max_deviation.size(); ++e) {
    std::ostringstream os;
    for (int k = 0; k < 4; ++k) os << (k ? "," : "") << fmt(table.max_deviation[e][k]);
    rep.note("max_dev_eps=" + fmt(eps_list[e]), os.str());
  }
  return table;
}

}  // namespace claw
