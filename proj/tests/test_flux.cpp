#include <doctest.h>

#include <cmath>
#include <random>

#include "claw/error.hpp"
#include "claw/flux.hpp"

using namespace claw;

TEST_CASE("catalog entries") {
  SUBCASE("burgers1d") {
    const FluxSpec f = catalog_lookup("burgers1d");
    for (double k : {-2.0, 0.0, 0.5, 3.0}) {
      CHECK(f.eval({0.7, 0}, k)[0] == 0.5 * k * k);
      CHECK(f.dk({0.7, 0}, k)[0] == k);
      CHECK(f.div_x({0.7, 0}, k) == 0.0);
    }
    CHECK(f.homogeneous);
  }
  SUBCASE("xsquared1d") {
    const FluxSpec f = catalog_lookup("xsquared1d");
    CHECK(f.eval({1.5, 0}, 7.0)[0] == 2.25);
    CHECK(f.dk({1.5, 0}, 7.0)[0] == 0.0);
    CHECK(f.div_x({1.5, 0}, 7.0) == 3.0);
  }
  SUBCASE("product1d against central differences") {
    const FluxSpec f = catalog_lookup("product1d");
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> X(-2, 2), K(-2, 2);
    for (int i = 0; i < 10; ++i) {
      const double x = X(rng), k = K(rng), h = 1e-5;
      const double g = std::atan(x * x) + 1.0;
      CHECK(f.eval({x, 0}, k)[0] == doctest::Approx(g * std::sin(k)).epsilon(1e-14));
      const double fd = (f.eval({x + h, 0}, k)[0] - f.eval({x - h, 0}, k)[0]) / (2 * h);
      CHECK(std::abs(f.div_x({x, 0}, k) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
  SUBCASE("parameters") {
    const FluxSpec f = catalog_lookup("linear1d", {{"c", 3.0}});
    CHECK(f.eval({0, 0}, 2.0)[0] == 6.0);
    CHECK_THROWS_AS(catalog_lookup("linear1d", {{"speed", 1.0}}), ConfigError);
  }
  CHECK_THROWS_AS(catalog_lookup("burgers3d"), UnknownFlux);
}

TEST_CASE("lipschitz_constant examples") {
  CHECK(lipschitz_constant(catalog_lookup("burgers1d"), 1.0, 2.0) == 2.0);
  CHECK(lipschitz_constant(catalog_lookup("xsquared1d"), 5.0, 1.0) == 0.0);
  CHECK(lipschitz_constant(catalog_lookup("linear1d", {{"c", 3.0}}), 7.0, 1.0) == 3.0);
  SUBCASE("sampled estimate on a 10^4 grid agrees with the analytic sup") {
    // max |k + k'| / 2 over [-2, 2]^2
    const double n = sampled_lipschitz(catalog_lookup("burgers1d"), 1.0, 2.0, 100);
    CHECK(n == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("sampled-only path keeps a margin above the sup") {
    LipschitzOptions o;
    o.use_analytic = false;
    const double n = lipschitz_constant(catalog_lookup("burgers1d"), 1.0, 2.0, o);
    CHECK(n >= 2.0);
    CHECK(n <= 2.0 * 1.011);
  }
  SUBCASE("entry without a closed form") {
    const FluxSpec f = catalog_lookup("product2d");
    const double n = lipschitz_constant(f, 1.0, 1.0);
    CHECK(n >= sampled_lipschitz(f, 1.0, 1.0, 200));
  }
}

TEST_CASE("uniform_diffquot_deficit") {
  const auto b = uniform_diffquot_deficit(catalog_lookup("burgers1d"), {0, 0}, -1, 1, {0.1, 0.01, 0.001});
  for (double d : b) CHECK(d == 0.0);
  const auto x2 = uniform_diffquot_deficit(catalog_lookup("xsquared1d"), {1, 0}, -1, 1, {0.1, 0.01});
  CHECK(x2[0] == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(x2[1] == doctest::Approx(0.01).epsilon(1e-9));
  const auto p = uniform_diffquot_deficit(catalog_lookup("product1d"), {0.5, 0}, -1, 1, {0.1, 0.01, 0.001});
  CHECK(p[0] > p[1]);
  CHECK(p[1] > p[2]);
  CHECK(p[2] > 0.0);
  CHECK_THROWS_AS(uniform_diffquot_deficit(catalog_lookup("kinkx1d"), {0, 0}, -1, 1, {0.1}), SingularPoint);
}

TEST_CASE("sample_flux_bounds") {
  const FluxBounds b = sample_flux_bounds(catalog_lookup("burgers1d"), {{-1, 0}, {1, 0}}, 2.0);
  CHECK(b.max_speed == 2.0);
  CHECK(b.max_div == 0.0);
  const FluxBounds x = sample_flux_bounds(catalog_lookup("xsquared1d"), {{-3, 0}, {1, 0}}, 1.0);
  CHECK(x.max_div == 6.0);
}

TEST_CASE("avoid_singular moves only declared points") {
  const FluxSpec f = catalog_lookup("kinkx1d");
  const Point p = avoid_singular(f, {0, 0});
  CHECK(p[0] != 0.0);
  CHECK(std::abs(p[0]) < 1e-10);
  CHECK(avoid_singular(f, {0.5, 0})[0] == 0.5);
}
