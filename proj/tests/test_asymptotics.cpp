#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gedge/asymptotics.hpp"
#include "gedge/numerics.hpp"
#include "oracles.hpp"

using namespace gedge;

TEST_CASE("right tail") {
  const std::vector<double> grid{1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  const RightTailReport r = right_tail_check(grid);
  CHECK(r.passed());
  CHECK(r.max_ratio <= 2.0);
  for (const auto& p : r.points) {
    CHECK(p.approximation == doctest::Approx(1.0 - oracle::erfc(p.t) / 4.0).epsilon(1e-15));
  }
  const RightTailPoint& at4 = r.points.back();
  CHECK(std::abs(at4.probability - at4.approximation) <= 2.0 * std::exp(-32.0));
  const RightTailPoint& at2 = r.points[1];
  CHECK(at2.a_t_ratio <= 2.0);

  const std::vector<double> bad{1.0};
  CHECK_THROWS_AS(right_tail_check(bad), std::invalid_argument);
}

TEST_CASE("left tail fit") {
  const TailFitReport r = left_tail_fit(-12.0, -6.0);
  CHECK(r.target_slope == doctest::Approx(-0.521093).epsilon(1e-6));
  CHECK(r.passed());
  CHECK(std::abs(r.slope - r.target_slope) <= 0.02);
  CHECK(std::abs(r.slope - r.endpoint_slope) <= 0.01);
  CHECK(std::abs(r.log_det_rate + 1.0422) <= 0.03);
  CHECK(r.log_det_slope > r.log_det_rate);
  CHECK(std::isfinite(r.residual_max));
  CHECK(r.t.size() == 7);

  SUBCASE("windows further out sit closer to the rate") {
    const TailFitReport far = left_tail_fit(-14.0, -8.0);
    CHECK(std::abs(far.slope - far.target_slope) <= std::abs(r.slope - r.target_slope) + 1e-4);
  }
  CHECK_THROWS_AS(left_tail_fit(-15.0, -6.0), std::invalid_argument);
  CHECK_THROWS_AS(left_tail_fit(-12.0, -5.0), std::invalid_argument);
  CHECK_THROWS_AS(left_tail_fit(-8.0, -8.0), std::invalid_argument);
}

TEST_CASE("operator bound audit") {
  const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 3.0, 4.0, -4.0, -10.0};
  const auto audit = operator_bound_audit(grid);
  REQUIRE(audit.size() == grid.size());
  for (const auto& b : audit) {
    CAPTURE(b.t);
    CHECK(b.trace_bound_ok);
    CHECK(b.radius_bound_ok);
  }
  CHECK(audit[2].spectral_radius <= 0.125 * std::exp(-2.0) + 1e-12);
  CHECK(audit[0].trace <= 0.125);
  CHECK(audit.back().spectral_radius < 1.0);
  CHECK_THROWS_AS(operator_bound_audit(std::vector<double>{5.0}), std::invalid_argument);

  // Audits do not change what they inspect.
  const auto again = operator_bound_audit(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(again[i].trace == audit[i].trace);
}
