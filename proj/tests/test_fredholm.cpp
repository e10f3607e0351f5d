#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "gedge/fredholm.hpp"
#include "gedge/kernel.hpp"
#include "gedge/walk.hpp"
#include "oracles.hpp"

using namespace gedge;

namespace {

WalkConfig walk_cfg(std::uint64_t seed) {
  WalkConfig cfg;
  cfg.seed = seed;
  return cfg;
}

constexpr std::uint64_t kPaths = 200'000;

}  // namespace

TEST_CASE("discretize: operator invariants over the supported range") {
  for (double t = -14.0; t <= 10.0; t += 1.5) {
    CAPTURE(t);
    const DiscretizedOperator op = discretize(t, 64);
    CHECK(op.cutoff == doctest::Approx(std::max(t, 0.0) + 6.0));
    CHECK(op.widenings == 0);
    CHECK((op.matrix - op.matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(op.eigenvalues.minCoeff() >= -1e-14);
    CHECK(op.spectral_radius() < 1.0);
    double boundary = 0.0;
    for (double x : op.rule.nodes) boundary = std::max(boundary, kernel_T(op.cutoff, x));
    CHECK(boundary < 1e-14);
  }
}

TEST_CASE("discretize: reference values") {
  CHECK(discretize(10.0, 64).trace() <= 0.125 * std::exp(-200.0));
  CHECK(discretize(0.0, 128).spectral_radius() < 0.125);
  CHECK(std::abs(log_det(discretize(-4.0, 64)) - log_det(discretize(-4.0, 256))) <= 1e-8);
}

TEST_CASE("discretize: Nystrom spectrum is preserved by symmetrization") {
  const DiscretizedOperator op = discretize(-3.0, 48);
  const auto n = static_cast<Eigen::Index>(op.size());
  Eigen::MatrixXd nystrom(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      nystrom(i, j) = kernel_T(op.rule.nodes[i], op.rule.nodes[j]) * op.rule.weights[j];
    }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(nystrom, false);
  Eigen::VectorXd re = es.eigenvalues().real();
  std::sort(re.data(), re.data() + n);
  for (Eigen::Index i = 0; i < n; ++i) CHECK(std::abs(re[i] - op.eigenvalues[i]) <= 1e-12);
}

TEST_CASE("discretize: rejects bad input") {
  CHECK_THROWS_AS(discretize(0.0, 15), std::invalid_argument);
  CHECK_THROWS_AS(discretize(NAN, 64), std::invalid_argument);
  CHECK_THROWS_AS(discretize(INFINITY, 64), std::invalid_argument);
}

TEST_CASE("log_det") {
  CHECK(std::abs(log_det(discretize(8.0))) <= 1e-15);
  const double l2 = log_det(discretize(-2.0));
  const double l1 = log_det(discretize(-1.0));
  const double l0 = log_det(discretize(0.0));
  CHECK(l2 < l1);
  CHECK(l1 < l0);
  CHECK(l0 <= 0.0);

  SUBCASE("agrees with the walk exponent at t = -10") {
    const McEstimate w = estimate_weighted_delta0(-10.0, kPaths, walk_cfg(101));
    const double ld = log_det(discretize(-10.0));
    CAPTURE(w.mean);
    CAPTURE(w.std_error);
    CHECK(std::abs(-ld - w.mean) <= 3.0 * w.std_error);
  }
}

TEST_CASE("solve_resolvent") {
  const DiscretizedOperator op0 = discretize(0.0, 128);
  for (double f : solve_resolvent(op0, [](double) { return 0.0; })) CHECK(f == 0.0);

  const DiscretizedOperator op6 = discretize(6.0, 64);
  const auto f6 = solve_resolvent(op6, density_g);
  for (std::size_t i = 0; i < op6.size(); ++i) {
    const double g = density_g(op6.rule.nodes[i]);
    CHECK(std::abs(f6[i] - g) <= 1e-12 * g);
  }

  SUBCASE("t = 0: f >= g and equals the Neumann series") {
    const auto f = solve_resolvent(op0, density_g);
    const auto n = static_cast<Eigen::Index>(op0.size());
    Eigen::VectorXd w(n), g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      w[i] = op0.rule.weights[i];
      g[i] = density_g(op0.rule.nodes[i]);
    }
    // K W as it acts on nodal values, built directly from kernel_T.
    Eigen::MatrixXd kw(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        kw(i, j) = kernel_T(op0.rule.nodes[i], op0.rule.nodes[j]) * w[j];
      }
    }
    Eigen::VectorXd term = g, series = g;
    for (int k = 0; k < 60; ++k) {
      term = kw * term;
      series += term;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(f[i] >= g[i]);
      CHECK(std::abs(f[i] - series[i]) <= 1e-12 * series.cwiseAbs().maxCoeff());
    }
  }
  SUBCASE("residual") {
    const DiscretizedOperator op = discretize(-8.0, 128);
    auto rhs = [](double x) { return std::cos(x) + 2.0; };
    const auto f = solve_resolvent(op, rhs);
    double worst = 0.0;
    for (std::size_t i = 0; i < op.size(); ++i) {
      double kf = 0.0;
      for (std::size_t j = 0; j < op.size(); ++j) {
        kf += kernel_T(op.rule.nodes[i], op.rule.nodes[j]) * op.rule.weights[j] * f[j];
      }
      worst = std::max(worst, std::abs(f[i] - kf - rhs(op.rule.nodes[i])));
    }
    CHECK(worst <= 1e-10 * 3.0);
  }
  CHECK_THROWS_AS(solve_resolvent(op0, [](double) { return NAN; }), std::invalid_argument);
}

TEST_CASE("a_t") {
  const double erfc2 = oracle::erfc(2.0);
  CHECK(std::abs(a_t(discretize(2.0)) - 0.002338867) <= 4.3e-5);
  CHECK(std::abs(a_t(discretize(2.0)) - 0.5 * erfc2) <= 0.5 * erfc2 * 2.0 * std::exp(-4.0));
  CHECK(std::abs(a_t(discretize(8.0))) <= 1e-15);
  for (double t = -14.0; t <= 10.0; t += 2.0) {
    const double a = a_t(discretize(t, 64));
    CHECK(a >= -1e-10);
    CHECK(a <= 1.0 + 1e-10);
  }
}

TEST_CASE("a_t equals the walk probability P(tau_t > tau_0)") {
  for (double t : {-4.0, -3.0, -2.0, -1.0, 0.0, 1.0}) {
    CAPTURE(t);
    const ExitEnsemble e = run_exit_ensemble(t, kPaths, walk_cfg(202));
    const double p_low = e.exit_and_weight.x.mean;
    const double se = e.exit_and_weight.x.std_error();
    CHECK(e.n_barrier_first + e.n_zero_first + e.n_censored == e.n_paths);
    CHECK(std::abs((1.0 - a_t(discretize(t))) - p_low) <= 3.0 * se);
  }
}

TEST_CASE("cdf_at") {
  const EdgeCdfPoint p2 = cdf_at(2.0);
  CHECK(p2.method == Method::fredholm);
  CHECK(std::abs(p2.probability - 0.99883057) <= 3.4e-4);
  CHECK(std::abs(p2.probability - (1.0 - oracle::erfc(2.0) / 4.0)) <= 2.0 * std::exp(-8.0));
  CHECK(std::abs(cdf_at(8.0).probability - 1.0) <= 1e-12);
  CHECK(cdf_at(-14.0).probability > 0.0);

  SUBCASE("agrees with the walk route at t = -8") {
    const EdgeCdfPoint mc = cdf_mc(-8.0, kPaths, walk_cfg(303));
    const EdgeCdfPoint fr = cdf_at(-8.0);
    CHECK(std::abs(mc.probability - fr.probability) <=
          3.0 * std::hypot(mc.error_estimate, fr.error_estimate));
  }
  SUBCASE("error estimate is the grid-halving difference") {
    const EdgeCdfPoint p = cdf_at(-5.0, 32);
    const double coarse = cdf_at(-5.0, 16).probability;
    CHECK(p.error_estimate == doctest::Approx(std::abs(p.probability - coarse)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(cdf_at(-14.5), std::invalid_argument);
  CHECK_THROWS_AS(cdf_at(10.5), std::invalid_argument);
  CHECK_THROWS_AS(cdf_at(0.0, 8), std::invalid_argument);
}

TEST_CASE("grid refinement converges spectrally") {
  for (double t = -8.0; t <= 4.0; t += 1.0) {
    CAPTURE(t);
    const double p32 = cdf_at(t, 32).probability;
    const double p64 = cdf_at(t, 64).probability;
    const double p128 = cdf_at(t, 128).probability;
    const double p256 = cdf_at(t, 256).probability;
    // Once both differences reach round-off the ratio carries no information.
    constexpr double kFloor = 1e-14;
    CHECK(std::abs(p64 - p128) <= std::max(std::abs(p32 - p64) / 10.0, kFloor));
    CHECK(std::abs(p128 - p256) <= std::max(std::abs(p64 - p128) / 10.0, kFloor));
    CHECK(std::abs(p64 - p128) < 1e-8);
  }
}

TEST_CASE("operator bounds for t > 0") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int k = 0; k < 25; ++k) {
    const double t = u(gen);
    const DiscretizedOperator op = discretize(t, 128);
    const double bound = 0.125 * std::exp(-2.0 * t * t) + 1e-12;
    CAPTURE(t);
    CHECK(op.spectral_radius() <= bound);
    CHECK(op.trace() <= bound);
  }
}

TEST_CASE("cdf_curve") {
  const std::vector<double> g3{-2.0, 0.0, 2.0};
  const auto c3 = cdf_curve(g3);
  REQUIRE(c3.size() == 3);
  CHECK(c3[0].probability < c3[1].probability);
  CHECK(c3[1].probability < c3[2].probability);

  const std::vector<double> one{-1.25};
  const auto c1 = cdf_curve(one);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].probability == cdf_at(-1.25).probability);

  const std::vector<double> left{-12, -11, -10, -9, -8, -7, -6};
  const auto cl = cdf_curve(left, kDefaultNodes, 2);
  for (std::size_t i = 1; i < cl.size(); ++i) {
    const double diff = std::log(cl[i - 1].probability) - std::log(cl[i].probability);
    CHECK(std::abs(diff + 0.5211) <= 0.02);
  }

  const auto serial = cdf_curve(left, 64, 1);
  const auto threaded = cdf_curve(left, 64, 3);
  for (std::size_t i = 0; i < left.size(); ++i) CHECK(serial[i].probability == threaded[i].probability);

  for (const auto& p : cdf_curve(make_grid(-10.0, 6.0, 0.5), 64)) {
    CHECK(p.probability >= 0.0);
    CHECK(p.probability <= 1.0);
    CHECK(p.error_estimate >= 0.0);
  }

  const std::vector<double> unsorted{0.0, -1.0};
  CHECK_THROWS_AS(cdf_curve(unsorted), std::invalid_argument);
  const std::vector<double> outside{-20.0, 0.0};
  CHECK_THROWS_WITH_AS(cdf_curve(outside), doctest::Contains("-20"), std::invalid_argument);
  CHECK_THROWS_AS(cdf_curve(std::vector<double>{}), std::invalid_argument);
}
