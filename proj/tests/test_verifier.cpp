#include <doctest.h>

#include <cmath>
#include <limits>

#include <json.hpp>

#include "claw/error.hpp"
#include "claw/quadrature.hpp"
#include "claw/verifier.hpp"

using namespace claw;

namespace {

std::vector<double> uniform_times(double t_end, int n) {
  std::vector<double> t;
  for (int i = 0; i <= n; ++i) t.push_back(t_end * i / n);
  return t;
}

GridField constant_field(const Grid& g, double c, const std::vector<double>& times) {
  GridField f{g, times, {}, std::abs(c)};
  f.data.assign(times.size(), std::vector<double>(g.cells(), c));
  return f;
}

SchemeConfig scheme(Grid g, double t_end) {
  SchemeConfig c;
  c.grid = g;
  c.t_end = t_end;
  return c;
}

// 1/4 int phi(t/2, t) dt: Kruzkov k0 = 1/2 residual of the Burgers shock (1, 0).
double shock_oracle(const TestFunction& phi) {
  return 0.25 * quad::integrate([&](double t) { return phi.value({0.5 * t, 0}, t); }, 0.0, 1.0, {1e-12, 30});
}

}  // namespace

TEST_CASE("entropy residual of a constant state vanishes") {
  const FluxSpec b = catalog_lookup("burgers1d");
  const Grid g{1, -1, 1, 200};
  const GridField u = constant_field(g, 0.3, uniform_times(1.0, 200));
  const TestFunction phi = bump_test_function(1, {0.1, 0}, 0.5, 0.5, 0.3);
  for (const EntropyPair& p : entropy_sweep(b, 1.0)) {
    const ResidualReport r = entropy_residual(u, b, p, phi);
    CHECK(std::abs(r.value) <= 1e-10);
    CHECK(r.passed);
  }
  const FluxSpec b2 = catalog_lookup("burgers2d");
  const GridField u2 = constant_field(Grid{2, -1, 1, 40}, -0.2, uniform_times(1.0, 40));
  const TestFunction phi2 = bump_test_function(2, {0.1, -0.1}, 0.6, 0.5, 0.3);
  CHECK(std::abs(entropy_residual(u2, b2, make_kruzkov_pair(b2, 0.1), phi2).value) <= 1e-10);
}

TEST_CASE("entropy residual of exact shocks matches the jump-condition oracle") {
  const FluxSpec b = catalog_lookup("burgers1d");
  const Grid g{1, -1.5, 1.5, 1500};
  const auto times = uniform_times(1.0, 500);
  GridField ent = riemann_field(g, 1, 0, 0, times, true);
  GridField exp = riemann_field(g, 0, 1, 0, times, false);
  ent.bound_M = exp.bound_M = 1.0;
  const TestFunction phi = bump_test_function(1, {0.25, 0}, 0.5, 0.5, 0.4);
  const double oracle = shock_oracle(phi);
  const EntropyPair k = make_kruzkov_pair(b, 0.5);
  const ResidualReport re = entropy_residual(ent, b, k, phi);
  const ResidualReport rx = entropy_residual(exp, b, k, phi);
  CHECK(re.value > 0.0);
  CHECK(re.value == doctest::Approx(oracle).epsilon(1e-3));
  CHECK(rx.value == doctest::Approx(-oracle).epsilon(1e-3));
  CHECK(entropy_sweep_residual(ent, b, entropy_sweep(b, 1.0), phi).passed);
  CHECK(re.metadata.at("flux") == "burgers1d");
}

TEST_CASE("entropy residual errors") {
  const FluxSpec b = catalog_lookup("burgers1d");
  const GridField u = constant_field(Grid{1, -1, 1, 100}, 0.0, uniform_times(1.0, 100));
  const EntropyPair k = make_kruzkov_pair(b, 0.0);
  CHECK_THROWS_AS(entropy_residual(u, b, k, bump_test_function(1, {0.8, 0}, 0.5, 0.5, 0.3)), SupportExceedsDomain);
  CHECK_THROWS_AS(entropy_residual(u, b, k, bump_test_function(1, {0, 0}, 0.5, 0.9, 0.3)), MissingTimeLevels);
}

TEST_CASE("kato inequality") {
  const FluxSpec b = catalog_lookup("burgers1d");
  SchemeConfig c = scheme(Grid{1, -3, 3, 2400}, 1.5);
  c.state_bound = 1.0;
  const GridField u = solve(b, data::Riemann{1, 0, 0}, c);
  const GridField v = solve(b, data::Riemann{1, 0, 0.2}, c);
  const ConeSpec cone = make_cone(1, 2.0, 1.0, 1.5);
  const TestFunction psi = contraction_test_function(cone, 0.2, 1.2, 0.1, 0.1);

  CHECK(kato_lhs(u, u, b, psi).value == 0.0);
  const ResidualReport r = kato_lhs(u, v, b, psi);
  CHECK(r.passed);
  CHECK(r.value >= -r.tolerance);

  SUBCASE("against a constant it is the Kruzkov residual") {
    const GridField k = constant_field(u.grid, 0.4, u.times);
    const double a = kato_lhs(u, k, b, psi).value;
    const double e = entropy_residual(u, b, make_kruzkov_pair(b, 0.4), psi).value;
    CHECK(std::abs(a - e) <= 1e-12);
  }
  SUBCASE("grid mismatch") {
    SchemeConfig c2 = c;
    c2.grid.nx = 1200;
    CHECK_THROWS_AS(kato_lhs(u, solve(b, data::Riemann{1, 0, 0}, c2), b, psi), GridMismatch);
  }
}

TEST_CASE("cone contraction") {
  const FluxSpec b = catalog_lookup("burgers1d");
  SchemeConfig c = scheme(Grid{1, -4, 4, 3200}, 1.9);
  c.state_bound = 1.0;
  c.store_every = 4;
  const GridField u = solve(b, data::Box{1, -0.5, 0, 0}, c);
  const GridField v = solve(b, data::Box{1, -0.4, 0.1, 0}, c);

  SUBCASE("identical solutions") {
    const ConeProfile p = cone_contraction_profile(u, u, b, 2.0);
    for (const ProfileRow& r : p.rows) CHECK(r.l1_mass == 0.0);
    CHECK(p.report.passed);
  }
  SUBCASE("shifted boxes") {
    const ConeProfile p = cone_contraction_profile(u, v, b, 2.0);
    CHECK(p.report.passed);
    CHECK(std::stod(p.report.metadata.at("N")) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::stod(p.report.metadata.at("flux_bound_excess")) <= 1e-12);
    CHECK(p.rows.front().radius == 2.0);
    for (std::size_t i = 1; i < p.rows.size(); ++i) CHECK(p.rows[i].radius < p.rows[i - 1].radius);
  }
  SUBCASE("data differing only outside the ball") {
    const GridField w = solve(b, data::Box{1, -0.5, 2.5, 0}, c);
    const GridField z = solve(b, data::Box{1, -0.5, 3.0, 0}, c);
    const ConeProfile p = cone_contraction_profile(w, z, b, 2.0);
    for (const ProfileRow& r : p.rows) CHECK(r.l1_mass <= p.report.tolerance);
    CHECK(p.report.passed);
  }
  SUBCASE("empty cone") {
    GridField late = u;
    late.times.erase(late.times.begin(), late.times.begin() + 100);
    late.data.erase(late.data.begin(), late.data.begin() + 100);
    CHECK(late.times.front() > 0.5);
    CHECK_THROWS_AS(cone_contraction_profile(late, late, b, 0.5), EmptyCone);
  }
}

TEST_CASE("two weak solutions of the same data violate contraction") {
  const FluxSpec b = catalog_lookup("burgers1d");
  const Grid g{1, -3, 3, 1200};
  const auto times = uniform_times(1.0, 200);
  GridField rare = riemann_field(g, 0, 1, 0, times, true);
  GridField expn = riemann_field(g, 0, 1, 0, times, false);
  rare.bound_M = expn.bound_M = 1.0;
  const ConeProfile p = cone_contraction_profile(rare, expn, b, 2.0);
  CHECK(p.rows.front().l1_mass == 0.0);
  CHECK(p.rows.back().l1_mass > 0.1);
  CHECK(std::stod(p.report.metadata.at("positive_increment")) > 0.0);
  ContractionOptions o;
  o.bound = 1.0;
  const GlobalContraction gc = global_contraction_check(rare, expn, b, {2, 4}, o);
  CHECK_FALSE(gc.report.passed);
  CHECK(gc.report.value > gc.report.tolerance);
}

TEST_CASE("global contraction") {
  const FluxSpec b = catalog_lookup("burgers1d");
  SchemeConfig c = scheme(Grid{1, -4, 4, 800}, 1.5);
  c.state_bound = 1.0;
  const GridField u = solve(b, data::Box{1, -0.5, 0, 0}, c);
  const GridField v = solve(b, data::Box{1, -0.4, 0.1, 0}, c);
  ContractionOptions o;
  o.bound = 1.0;
  const GlobalContraction gc = global_contraction_check(u, v, b, {1, 2, 4, 8}, o);
  CHECK(gc.speed_over_radius == std::vector<double>{1.0, 0.5, 0.25, 0.125});
  CHECK(gc.report.passed);
  CHECK(gc.report.metadata.at("hypothesis_holds") == "true");
  CHECK(global_contraction_check(u, u, b, {1, 2}).report.value == 0.0);
  CHECK_THROWS_AS(global_contraction_check(u, v, b, {2, 1}), ConfigError);

  SUBCASE("translation by one cell") {
    SchemeConfig p = scheme(Grid{1, 0, 2, 200}, 1.0);
    p.boundary = Boundary::periodic;
    p.state_bound = 1.0;
    const double dx = p.grid.dx();
    const auto f0 = [](const Point& x) { return 0.5 + 0.4 * std::sin(M_PI * x[0]); };
    const auto f1 = [&](const Point& x) { return f0({x[0] - dx, 0}); };
    const GridField a = solve(b, data::Function{f0}, p);
    const GridField bb = solve(b, data::Function{f1}, p);
    ContractionOptions o;
    o.center = {1, 0};
    const GlobalContraction t = global_contraction_check(a, bb, b, {1, 2, 4}, o);
    // v is u shifted by one cell, so ||u - v||_1 = dx TV(u).
    for (const ProfileRow& r : t.rows) {
      const auto& un = a.data[a.level_index(r.t)];
      double tv = 0.0;
      for (std::size_t i = 0; i < un.size(); ++i) tv += std::abs(un[i] - un[(i + un.size() - 1) % un.size()]);
      CHECK(r.l1_mass == doctest::Approx(dx * tv).epsilon(1e-10));
    }
  }
  SUBCASE("k-independent flux keeps the distance") {
    const FluxSpec x2 = catalog_lookup("xsquared1d");
    SchemeConfig p = scheme(Grid{1, -1, 1, 100}, 0.5);
    const GridField a = solve(x2, data::Sine{0.5, 1, 0}, p);
    const GridField z = solve(x2, data::Sine{0.3, 2, 0.1}, p);
    const GlobalContraction t = global_contraction_check(a, z, x2, {1, 2});
    CHECK(t.speed_over_radius == std::vector<double>{0.0, 0.0});
    CHECK(t.report.passed);
    for (const ProfileRow& r : t.rows) CHECK(r.l1_mass == doctest::Approx(t.rows.front().l1_mass).epsilon(1e-12));
  }
}

TEST_CASE("uniqueness") {
  const FluxSpec b = catalog_lookup("burgers1d");
  const SchemeConfig a = scheme(Grid{1, -1, 1, 400}, 0.5);
  SUBCASE("identical configurations") {
    const UniquenessResult r = uniqueness_experiment(b, data::Riemann{1, 0, 0}, {a, a});
    CHECK(r.coarse_distances[0] == 0.0);
    CHECK(r.fine_distances[0] == 0.0);
    CHECK(r.report.passed);
  }
  SUBCASE("rarefaction data converge to the exact solution") {
    SchemeConfig h = a;
    h.cfl = 0.45;
    SchemeConfig v = a;
    v.scheme = Scheme::viscous;
    v.viscosity = 2;
    v.viscosity_per_dx = true;
    const UniquenessResult r = uniqueness_experiment(b, data::Riemann{0, 1, 0}, {a, h, v});
    CHECK(r.report.passed);
    REQUIRE(r.oracle_ratios.size() == 3);
    for (double q : r.oracle_ratios) CHECK(q >= 1.4);
  }
  SUBCASE("seeds must share t_end and grid") {
    SchemeConfig t = a;
    t.t_end = 0.4;
    CHECK_THROWS_AS(uniqueness_experiment(b, data::Constant{0}, {a, t}), ConfigError);
    SchemeConfig g = a;
    g.grid.nx = 200;
    CHECK_THROWS_AS(uniqueness_experiment(b, data::Constant{0}, {a, g}), GridMismatch);
  }
}

TEST_CASE("doubling diagnostics") {
  const FluxSpec p = catalog_lookup("product1d");
  SchemeConfig c = scheme(Grid{1, -2, 2, 800}, 0.5);
  c.state_bound = 1.5;
  const GridField u = solve(p, data::Sine{0.3, 0.5, 0.0}, c);
  const GridField v = solve(p, data::Sine{0.3, 0.25, 0.6}, c);
  const std::vector<SamplePoint> pts{{{-0.3, 0}, 0.2}, {{0.45, 0}, 0.3}};

  const DoublingTable t = doubling_diagnostics(u, v, p, {0.1, 0.05, 0.025}, pts);
  CHECK(t.report.passed);
  REQUIRE(t.max_deviation.size() == 3);
  for (int k = 0; k < 4; ++k) CHECK(t.max_deviation[2][k] < t.max_deviation[0][k] / 4);

  SUBCASE("u = v") {
    const DoublingTable s = doubling_diagnostics(u, u, p, {0.1, 0.05, 0.025}, pts);
    for (const DoublingRow& r : s.rows) {
      CHECK(r.limits[0] == 0.0);
      CHECK(r.limits[1] == 0.0);
      CHECK(r.limits[2] + r.limits[3] == 0.0);
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const DoublingRow& coarse = s.rows[k];
      const DoublingRow& fine = s.rows[2 * pts.size() + k];
      REQUIRE(coarse.point == k);
      REQUIRE(fine.point == k);
      CHECK(std::abs(fine.integrals[0]) <= 0.3 * std::abs(coarse.integrals[0]));
      CHECK(std::abs(fine.integrals[1]) <= 0.3 * std::abs(coarse.integrals[1]));
      CHECK(std::abs(fine.integrals[2] + fine.integrals[3]) <= 0.6 * std::abs(coarse.integrals[2] + coarse.integrals[3]));
    }
  }
  SUBCASE("k-independent flux") {
    const FluxSpec x2 = catalog_lookup("xsquared1d");
    const GridField a = solve(x2, data::Sine{0.3, 0.5, 0.0}, c);
    const GridField z = solve(x2, data::Sine{0.3, 0.25, 0.6}, c);
    const DoublingTable s = doubling_diagnostics(a, z, x2, {0.1, 0.05}, pts);
    for (const DoublingRow& r : s.rows) {
      CHECK(r.integrals[1] == 0.0);
      CHECK(r.integrals[3] == 0.0);
    }
  }
  SUBCASE("samples near a shock are refused") {
    const FluxSpec b = catalog_lookup("burgers1d");
    SchemeConfig s = scheme(Grid{1, -2, 2, 400}, 0.5);
    const GridField w = solve(b, data::Riemann{1, 0, 0}, s);
    const GridField z = solve(b, data::Riemann{1, 0, 0.5}, s);
    DoublingOptions o;
    o.lip_estimate = 1.0;
    CHECK_THROWS_AS(doubling_diagnostics(w, z, b, {0.1}, {{{0.125, 0}, 0.25}}, o), SampleNearShock);
    CHECK_NOTHROW(doubling_diagnostics(w, z, b, {0.1}, {{{-1.0, 0}, 0.25}}, o));
  }
  SUBCASE("window outside the stored data") {
    CHECK_THROWS_AS(doubling_diagnostics(u, v, p, {0.1}, {{{0, 0}, 0.05}}), MissingTimeLevels);
    CHECK_THROWS_AS(doubling_diagnostics(u, v, p, {0.1}, {{{1.95, 0}, 0.2}}), SupportExceedsDomain);
  }
}

TEST_CASE("report serialization") {
  ResidualReport r;
  r.kind = CheckKind::cone_contraction;
  r.value = -0.5;
  r.tolerance = 0.25;
  r.passed = false;
  r.note("flux", "burgers1d");
  r.note("R", 2.0);
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["kind"] == "cone_contraction");
  CHECK(j["value"] == -0.5);
  CHECK(j["passed"] == false);
  CHECK(j["metadata"]["R"] == "2");
  CHECK(check_kind_from_string("doubling") == CheckKind::doubling);
  CHECK_THROWS_AS(check_kind_from_string("cone"), ConfigError);
}

TEST_CASE("positive increments below round-off are zero") {
  CHECK(positive_increment(-1.0, 1.0) == 0.0);
  CHECK(positive_increment(1e-16, 1.0) == 0.0);
  CHECK(positive_increment(1e-6, 1.0) == 1e-6);
}
