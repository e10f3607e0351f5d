#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "gedge/numerics.hpp"
#include "oracles.hpp"

using namespace gedge;

namespace {
// Frozen oracle outputs (series / continued fraction, cross-checked by quadrature below).
constexpr double kErfc2 = 0.004677734981047266;
constexpr double kZeta32 = 2.612375348685488;
}  // namespace

TEST_CASE("erfc oracle agrees with quadrature") {
  for (double x : {-2.5, -1.0, 0.0, 0.3, 1.3, 2.0, 3.5, 5.0}) {
    CAPTURE(x);
    CHECK(oracle::erfc(x) == doctest::Approx(oracle::erfc_by_quadrature(x)).epsilon(1e-13));
  }
  CHECK(oracle::erfc(2.0) == doctest::Approx(kErfc2).epsilon(1e-15));
}

TEST_CASE("erfc_precise") {
  CHECK(erfc_precise(0.0) == 1.0);
  CHECK(erfc_precise(1.3) == doctest::Approx(2.0 - erfc_precise(-1.3)).epsilon(1e-16));
  CHECK(std::abs(erfc_precise(2.0) - kErfc2) <= 1e-14 * kErfc2);

  SUBCASE("relative error against the oracle on [-10, 10]") {
    for (double x = -10.0; x <= 10.0; x += 0.173) {
      CAPTURE(x);
      const double ref = oracle::erfc(x);
      CHECK(std::abs(erfc_precise(x) - ref) <= 2e-14 * ref);
    }
  }
  SUBCASE("reflection") {
    for (double x = 0.0; x < 6.0; x += 0.25) {
      CHECK(erfc_precise(x) + erfc_precise(-x) == doctest::Approx(2.0).epsilon(1e-16));
    }
  }
  SUBCASE("far tail underflows cleanly") {
    CHECK(erfc_precise(30.0) >= 0.0);
    CHECK(erfc_precise(30.0) <= 1e-300);
    CHECK(erfc_precise(-30.0) == 2.0);
  }
  SUBCASE("monotone, and erfc(x) e^{x^2} decreasing beyond 1") {
    double prev = erfc_precise(-5.0), prev_scaled = INFINITY;
    for (double x = -4.9; x < 9.0; x += 0.1) {
      const double v = erfc_precise(x);
      CHECK(v < prev);
      prev = v;
      if (x > 1.0) {
        const double scaled = v * std::exp(x * x);
        CHECK(scaled < prev_scaled);
        prev_scaled = scaled;
      }
    }
  }
  SUBCASE("pure") { CHECK(erfc_precise(0.77) == erfc_precise(0.77)); }
}

TEST_CASE("gauss_legendre_rule basics") {
  const QuadratureRule r = gauss_legendre_rule(2, -1.0, 1.0);
  REQUIRE(r.size() == 2);
  CHECK(r.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.weights[1] == doctest::Approx(1.0).epsilon(1e-15));

  const QuadratureRule r16 = gauss_legendre_rule(16, 0.0, 1.0);
  CHECK(r16.integrate([](double x) { return std::pow(x, 15); }) ==
        doctest::Approx(1.0 / 16.0).epsilon(1e-12));

  CHECK_THROWS_AS(gauss_legendre_rule(1, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre_rule(4, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre_rule(4, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre_rule(4, 0.0, INFINITY), std::invalid_argument);
}

TEST_CASE("gauss_legendre_rule invariants") {
  for (int n : {2, 3, 5, 16, 64, 127, 256, 512}) {
    for (auto [a, b] : {std::pair{-1.0, 1.0}, std::pair{-14.0, 6.0}, std::pair{2.0, 8.0}}) {
      CAPTURE(n);
      CAPTURE(a);
      const QuadratureRule r = gauss_legendre_rule(n, a, b);
      REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
      REQUIRE(r.weights.size() == static_cast<std::size_t>(n));
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        CHECK(r.nodes[i] > a);
        CHECK(r.nodes[i] < b);
        CHECK(r.weights[i] > 0.0);
        if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
        sum += r.weights[i];
      }
      CHECK(std::abs(sum - (b - a)) <= 1e-12 * (b - a));
    }
  }
}

TEST_CASE("gauss_legendre_rule is exact for random polynomials of degree 2n-1") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> size(2, 40);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(gen);
    const double a = coef(gen) * 3.0;
    const double b = a + 0.5 + std::abs(coef(gen)) * 3.0;
    std::vector<double> c(2 * n);
    for (double& v : c) v = coef(gen);
    auto poly = [&](double x) {
      double v = 0.0;
      for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
      return v;
    };
    double exact = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      exact += c[k] * (std::pow(b, k + 1) - std::pow(a, k + 1)) / (k + 1);
    }
    double scale = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      scale += std::abs(c[k]) * (std::pow(std::max(std::abs(a), std::abs(b)), k + 1)) / (k + 1);
    }
    const QuadratureRule r = gauss_legendre_rule(n, a, b);
    CAPTURE(n);
    CHECK(std::abs(r.integrate(poly) - exact) <= 1e-11 * std::max(std::abs(exact), 1e-3 * scale));
  }
}

TEST_CASE("zeta(3/2) and the key constant") {
  CHECK(oracle::zeta_euler_maclaurin(1.5) == doctest::Approx(kZeta32).epsilon(1e-14));
  CHECK(oracle::zeta_euler_maclaurin(2.0) ==
        doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-14));
  CHECK(zeta_three_halves() == doctest::Approx(kZeta32).epsilon(1e-12));
  CHECK(key_constant() == doctest::Approx(1.042187).epsilon(1e-6));
  CHECK(key_constant() == doctest::Approx(kZeta32 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));

  long double partial = 0.0L;
  for (int n = 1; n <= 1'000'000; ++n) partial += 1.0L / (n * std::sqrt(static_cast<long double>(n)));
  CHECK(static_cast<double>(partial) < zeta_three_halves());
}
