#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "recreg/kernel.hpp"

using namespace recreg;
using Catch::Approx;

TEST_CASE("pointwise values", "[kernel]") {
  CHECK(Kernel::gaussian().eval(0.0) == Approx(0.3989423).epsilon(1e-7));
  CHECK(Kernel::epanechnikov().eval(2.0) == 0.0);
  CHECK(Kernel::epanechnikov().eval(0.0) == 0.75);
  CHECK(Kernel::epanechnikov().eval(1.0) == 0.0);
}

TEST_CASE("cached moments agree with adaptive quadrature", "[kernel]") {
  const auto k = GENERATE(Kernel::gaussian(), Kernel::epanechnikov());
  INFO(k.name());
  auto quad = [&](auto g) { return oracle::integrate(k, g); };
  CHECK(std::abs(k.moment(0) - quad([&](double z) { return k.eval(z); })) < 1e-8);
  CHECK(std::abs(k.moment(1) - quad([&](double z) { return z * k.eval(z); })) < 1e-8);
  CHECK(std::abs(k.moment(2) - quad([&](double z) { return z * z * k.eval(z); })) < 1e-8);
  CHECK(std::abs(k.square_integral() - quad([&](double z) { return k.eval(z) * k.eval(z); })) < 1e-8);
}

TEST_CASE("named moment values", "[kernel]") {
  CHECK(Kernel::gaussian().moment(2) == 1.0);
  CHECK(Kernel::gaussian().square_integral() == Approx(0.2820948).epsilon(1e-7));
  CHECK(Kernel::epanechnikov().square_integral() == Approx(0.6).epsilon(1e-15));
  CHECK_THROWS_AS(Kernel::gaussian().moment(3), InvalidArgument);
}

TEST_CASE("sup norm is attained at zero", "[kernel]") {
  const auto k = GENERATE(Kernel::gaussian(), Kernel::epanechnikov());
  CHECK(k.sup_norm() == Approx(k.eval(0.0)).epsilon(1e-15));
}

TEST_CASE("symmetry, nonnegativity and Lipschitz certificate", "[kernel]") {
  const auto k = GENERATE(Kernel::gaussian(), Kernel::epanechnikov());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 10'000; ++i) {
    const double z1 = u(rng), z2 = u(rng);
    REQUIRE(k.eval(z1) == k.eval(-z1));
    REQUIRE(k.eval(z1) >= 0.0);
    REQUIRE(std::abs(k.eval(z1) - k.eval(z2)) <= k.lipschitz_constant() * std::abs(z1 - z2) + 1e-15);
  }
}

TEST_CASE("Lipschitz constants are tight", "[kernel]") {
  // finite-difference slope at the steepest point
  const double eps = 1e-7;
  const auto g = Kernel::gaussian();
  CHECK((g.eval(1.0 - eps) - g.eval(1.0 + eps)) / (2 * eps) == Approx(g.lipschitz_constant()).epsilon(1e-6));
  const auto e = Kernel::epanechnikov();
  CHECK((e.eval(1.0 - 2 * eps) - e.eval(1.0 - eps)) / eps == Approx(e.lipschitz_constant()).epsilon(1e-6));
}

TEST_CASE("kernels are selected by name", "[kernel]") {
  CHECK(Kernel::from_name("gaussian") == Kernel::gaussian());
  CHECK(Kernel::from_name("epanechnikov") == Kernel::epanechnikov());
  CHECK_THROWS_AS(Kernel::from_name("triweight"), InvalidArgument);
  CHECK(std::isinf(Kernel::gaussian().support_radius()));
}
