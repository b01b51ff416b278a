// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "claw/entropy.hpp"
#include "claw/error.hpp"
#include "claw/flux.hpp"
#include "claw/fv_solver.hpp"
#include "claw/mollifier.hpp"
#include "claw/verifier.hpp"

using namespace claw;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

const FluxSpec& burgers() {
  static const FluxSpec f = catalog_lookup("burgers1d");
  return f;
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, a, b);
}

// 1. Mollifier normalization.
void mollifier_normalization(Outcome& o) {
  const double raw = tanh_sinh([](double x) { return std::exp(1.0 / (x * x - 1.0)); }, -1.0, 1.0);
  const double c_err = std::abs(kernel_constant(1) - 1.0 / raw);
  double worst = 0.0;
  for (double e : {1.0, 0.1, 0.01}) {
    for (int dim : {1, 2}) worst = std::max(worst, std::abs(Mollifier(dim, e).integral() - 1.0));
    worst = std::max(worst, std::abs(tanh_sinh([&](double s) { return omega(e, s); }, -e, e) - 1.0));
  }
  o.detail << "max |mass - 1| = " << worst << ", |C - C_oracle| = " << c_err;
  o.require(worst <= 1e-10, "mass within 1e-10");
  o.require(c_err <= 1e-8, "C within 1e-8");
}

// 2. Entropy flux by quadrature and by integration by parts.
void entropy_flux_identity(Outcome& o) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ux(-2, 2), uk(-1.5, 1.5);
  double worst = 0.0;
  for (const char* name : {"burgers1d", "product1d", "product2d"}) {
    const FluxSpec f = catalog_lookup(name);
    for (int n : {1, 16, 256}) {
      const Entropy s = smooth_entropy(0.2, n);
      for (int i = 0; i < 100; ++i) {
        const Point x{ux(rng), f.dim == 2 ? ux(rng) : 0.0};
        const double k = uk(rng);
        const Point a = q_build_quadrature(f, s.eta_prime, 0.2, x, k);
        const Point b = q_build_ibp(f, s, 0.2, x, k);
        worst = std::max({worst, std::abs(a[0] - b[0]), std::abs(a[1] - b[1])});
      }
    }
  }
  o.detail << "max deviation = " << worst;
  o.require(worst <= 1e-8, "deviation within 1e-8");
}

// 3. Smooth entropy fluxes tend to the Kruzkov flux.
void kruzkov_limits(Outcome& o) {
  const std::vector<int> ns{1, 4, 16, 64, 256};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.1, 2), uk(-1.5, 1.5), uk0(-1, 1);
  struct State {
    FluxSpec f;
    double k0;
    Point x;
    double k;
  };
  std::vector<State> states;
  for (int i = 0; i < 20; ++i) {
    const FluxSpec f = catalog_lookup(i % 2 ? "product1d" : "kinkx1d");
    const double sx = std::uniform_int_distribution<int>(0, 1)(rng) ? 1.0 : -1.0;
    states.push_back({f, uk0(rng), {sx * ux(rng), 0.0}, uk(rng)});
  }
  // C is fitted per state from its n = 1 entry. The bound sup|d_k f| n^-1/2
  // from the integral of |eta_n' - sign| is reported alongside.
  int over_fit = 0, not_decreasing = 0, over_sup = 0;
  double worst_ratio = 0.0;
  for (const State& s : states) {
    const std::vector<double> q = kruzkov_limit_deficit(s.f, s.k0, s.x, s.k, ns);
    const std::vector<double> d = kruzkov_div_limit_deficit(s.f, s.k0, s.x, s.k, ns);
    double sup_dk = 0.0;
    for (int i = 0; i <= 1000; ++i) sup_dk = std::max(sup_dk, std::abs(s.f.dk(s.x, s.k0 + (s.k - s.k0) * i / 1000)[0]));
    bool fit_ok = true, dec_ok = true, sup_ok = true;
    for (std::size_t j = 0; j < ns.size(); ++j) {
      const double root = std::sqrt(static_cast<double>(ns[j]));
      worst_ratio = std::max(worst_ratio, q[j] * root / q[0]);
      fit_ok &= q[j] * root <= q[0] * (1 + 1e-12);
      sup_ok &= q[j] * root <= sup_dk * (1 + 1e-9);
      if (j > 0) dec_ok &= d[j] <= d[j - 1];
    }
    over_fit += !fit_ok;
    not_decreasing += !dec_ok;
    over_sup += !sup_ok;
  }
  o.detail << "states over the n=1 fit: " << over_fit << "/20 (max ratio " << worst_ratio
           << "), non-decreasing div deviations: " << not_decreasing << "/20, over sup|d_k f| n^-1/2: " << over_sup << "/20";
  o.require(over_fit == 0, "|q_n - q| <= C n^-1/2 with C from n = 1");
  o.require(not_decreasing == 0, "div deviations decrease");
}

// 4. Discrete Kruzkov inequality of the Rusanov scheme.
void discrete_entropy(Outcome& o) {
  SchemeConfig c;
  c.grid = Grid{1, -1, 1, 400};
  c.t_end = 1.0;
  std::vector<InitialData> sets{data::Riemann{1, 0, 0}, data::Riemann{-0.5, 1, 0.1}, data::Box{1, -0.5, 0, -0.2},
                                data::Sine{0.8, 1, 0.1}, data::Riemann{0.3, -0.7, -0.2}};
  std::vector<double> ks;
  for (int i = 0; i <= 40; ++i) ks.push_back(-1.2 + 2.4 * i / 40);
  double worst = -std::numeric_limits<double>::infinity();
  for (const InitialData& d : sets) worst = std::max(worst, max_cell_entropy_violation(solve(burgers(), d, c), burgers(), c, ks));
  o.detail << "dx = " << c.grid.dx() << ", max violation = " << worst;
  o.require(worst <= 1e-12, "violation within 1e-12");
}

// 5. Weak-form residual of exact and expansion shocks.
void weak_residual(Outcome& o) {
  const Grid g{1, -1.5, 1.5, 6000};
  std::vector<double> times;
  const int nt = static_cast<int>(std::lround(1.0 / g.dx()));
  for (int n = 0; n <= nt; ++n) times.push_back(double(n) / nt);
  GridField ent = riemann_field(g, 1, 0, 0, times, true);
  GridField exp = riemann_field(g, 0, 1, 0, times, false);
  ent.bound_M = exp.bound_M = 1.0;
  const TestFunction phi = bump_test_function(1, {0.25, 0}, 0.5, 0.5, 0.4);
  double ent_worst = std::numeric_limits<double>::infinity(), exp_worst = ent_worst, tol = 0.0;
  for (double k0 : kruzkov_k0_sweep(1.0)) {
    const EntropyPair p = make_kruzkov_pair(burgers(), k0);
    const ResidualReport a = entropy_residual(ent, burgers(), p, phi);
    const ResidualReport b = entropy_residual(exp, burgers(), p, phi);
    ent_worst = std::min(ent_worst, a.value);
    exp_worst = std::min(exp_worst, b.value);
    tol = a.tolerance;
  }
  o.detail << "tol = " << tol << ", entropic min = " << ent_worst << ", expansion min = " << exp_worst;
  o.require(ent_worst >= -tol, "entropic shock residual >= -tol");
  o.require(exp_worst < -tol, "expansion shock residual < -tol");
}

struct BoxPair {
  GridField u, v;
};

BoxPair box_pair(int nx) {
  SchemeConfig c;
  c.grid = Grid{1, -4, 4, nx};
  c.t_end = 1.9;
  c.state_bound = 1.0;
  return {solve(burgers(), data::Box{1, -0.5, 0, 0}, c), solve(burgers(), data::Box{1, -0.4, 0.1, 0}, c)};
}

double scale_of(const std::vector<ProfileRow>& rows) {
  double s = 0.0;
  for (const ProfileRow& r : rows) s = std::max(s, r.l1_mass);
  return s;
}

void shrink(Outcome& o, double coarse, double fine) {
  if (coarse == 0.0 && fine == 0.0) {
    o.detail << ", increments at round-off on both grids";
    return;
  }
  const double ratio = fine == 0.0 ? std::numeric_limits<double>::infinity() : coarse / fine;
  o.detail << ", increment shrink = " << ratio;
  o.require(ratio >= 1.5, "increment shrinks by 1.5");
}

// 6. Cone contraction.
void cone_contraction(Outcome& o) {
  const BoxPair a = box_pair(1600), b = box_pair(3200);
  const ConeProfile pa = cone_contraction_profile(a.u, a.v, burgers(), 2.0);
  const ConeProfile pb = cone_contraction_profile(b.u, b.v, burgers(), 2.0);
  o.detail << "N = " << pb.report.metadata.at("N") << ", max increase = " << pb.report.value
           << ", tol = " << pb.report.tolerance;
  o.require(pb.report.passed, "profile non-increasing within tolerance at dx = 1/400");
  shrink(o, positive_increment(pa.report.value, scale_of(pa.rows)), positive_increment(pb.report.value, scale_of(pb.rows)));
}

// 7. Global contraction.
void global_contraction(Outcome& o) {
  const BoxPair a = box_pair(1600), b = box_pair(3200);
  ContractionOptions opts;
  opts.bound = 1.0;
  const std::vector<double> radii{1, 2, 4, 8};
  const GlobalContraction ga = global_contraction_check(a.u, a.v, burgers(), radii, opts);
  const GlobalContraction gb = global_contraction_check(b.u, b.v, burgers(), radii, opts);
  o.detail << "N/R =";
  for (double r : gb.speed_over_radius) o.detail << " " << r;
  o.detail << ", max increase = " << gb.report.value << ", tol = " << gb.report.tolerance;
  o.require(gb.report.passed, "distance non-increasing within tolerance");
  o.require(gb.speed_over_radius == std::vector<double>{1.0, 0.5, 0.25, 0.125}, "N/R sequence exact");
  shrink(o, positive_increment(ga.report.value, scale_of(ga.rows)), positive_increment(gb.report.value, scale_of(gb.rows)));
}

// 8. Different monotone schemes converge to the same limit.
void uniqueness(Outcome& o) {
  SchemeConfig base;
  base.grid = Grid{1, -1, 1, 400};
  base.t_end = 0.5;
  base.store_every = 1000;
  SchemeConfig half = base;
  half.cfl = 0.45;
  SchemeConfig visc = base;
  visc.scheme = Scheme::viscous;
  visc.viscosity = 2;
  visc.viscosity_per_dx = true;
  for (const auto& [label, d] : {std::pair{"shock", data::Riemann{1, 0, 0}}, std::pair{"rarefaction", data::Riemann{0, 1, 0}}}) {
    const UniquenessResult r = uniqueness_experiment(burgers(), d, {base, half, visc});
    const double pair_min = *std::min_element(r.ratios.begin(), r.ratios.end());
    const double oracle_min = *std::min_element(r.oracle_ratios.begin(), r.oracle_ratios.end());
    o.detail << label << ": min pairwise ratio = " << pair_min << ", min oracle ratio = " << oracle_min << "; ";
    o.require(pair_min >= 1.5, std::string(label) + " pairwise distances shrink by 1.5");
    o.require(oracle_min >= 1.4, std::string(label) + " oracle errors shrink by 1.4");
  }
}

// 9. Perturbations outside B_R do not reach the strict interior cone.
void finite_speed(Outcome& o) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> noise(-0.5, 0.5);
  const double R = 2.0;
  std::size_t checked = 0, differing = 0;
  for (int dim : {1, 2}) {
    SchemeConfig c;
    c.grid = Grid{dim, -4, 4, dim == 1 ? 800 : 160};
    c.t_end = dim == 1 ? 1.0 : 0.5;
    c.state_bound = 1.5;
    const FluxSpec f = catalog_lookup(dim == 1 ? "burgers1d" : "burgers2d");
    const auto base = [](const Point& x) { return 0.5 * std::sin(2 * x[0]) + 0.3 * std::cos(3 * x[1]); };
    const double a = noise(rng), b = noise(rng);
    const auto perturbed = [&](const Point& x) {
      const double r = std::hypot(x[0], x[1]);
      return base(x) + (r > R ? a + b * std::sin(5 * x[0]) : 0.0);
    };
    const GridField u = solve(f, data::Function{base}, c);
    const GridField v = solve(f, data::Function{perturbed}, c);
    if (u.times != v.times) throw Error("time levels differ");
    const double dx = c.grid.dx();
    const double diag = dim == 1 ? 1.0 : std::sqrt(2.0);
    for (std::size_t n = 0; n < u.levels(); ++n)
      for (std::size_t i = 0; i < u.grid.cells(); ++i) {
        const Point x = u.grid.center(i);
        // Cells within n cells (per axis) of this one all lie inside B_R.
        if (std::hypot(x[0], x[1]) + (static_cast<double>(n) + 0.5) * dx * diag > R) continue;
        ++checked;
        if (u.data[n][i] != v.data[n][i]) ++differing;
      }
  }
  o.detail << "cells checked = " << checked << ", differing = " << differing;
  o.require(checked > 0, "interior cone non-empty");
  o.require(differing == 0, "bitwise identical");
}

// 10. Doubling-of-variables diagnostics.
void doubling(Outcome& o) {
  const FluxSpec p = catalog_lookup("product1d");
  SchemeConfig c;
  c.grid = Grid{1, -2, 2, 800};
  c.t_end = 0.5;
  c.state_bound = 1.5;
  const GridField u = solve(p, data::Sine{0.3, 0.5, 0.0}, c);
  const GridField v = solve(p, data::Sine{0.3, 0.25, 0.6}, c);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-0.8, 0.8), ut(0.15, 0.35);
  std::vector<SamplePoint> pts;
  for (int i = 0; i < 10; ++i) {
    const double x = ux(rng);
    pts.push_back({{x, 0.0}, ut(rng)});
  }
  const DoublingTable t = doubling_diagnostics(u, v, p, {0.1, 0.05, 0.025}, pts);
  o.detail << "max deviations by eps:";
  for (const auto& m : t.max_deviation) o.detail << " (" << m[0] << ", " << m[1] << ", " << m[2] << ", " << m[3] << ")";
  o.require(t.report.passed, "deviations decrease monotonically");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)(Outcome&)>> criteria{
      {"mollifier normalization", mollifier_normalization},
      {"entropy flux quadrature vs integration by parts", entropy_flux_identity},
      {"smooth entropy fluxes tend to the Kruzkov flux", kruzkov_limits},
      {"discrete entropy inequality", discrete_entropy},
      {"weak-form entropy residual", weak_residual},
      {"cone contraction", cone_contraction},
      {"global contraction", global_contraction},
      {"uniqueness across schemes", uniqueness},
      {"finite speed of propagation", finite_speed},
      {"doubling diagnostics", doubling},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << " [error: " << e.what() << "]";
    }
    failures += !o.passed;
    std::printf("criterion %2zu %s: %s  %s\n", i + 1, o.passed ? "PASS" : "FAIL", criteria[i].first,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
