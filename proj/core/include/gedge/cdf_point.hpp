#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace gedge {

enum class Method { fredholm, monte_carlo, ginibre_empirical, abm_empirical };

std::string_view to_string(Method m) noexcept;

/// One evaluation of P(lambda_max < t) by some route. This is the unit every
/// cross-validation compares.
struct EdgeCdfPoint {
  double t = 0.0;
  double probability = 0.0;
  Method method = Method::fredholm;
  double error_estimate = 0.0;
};

/// Empirical CDF of `samples` at each grid point: fraction strictly below t,
/// with the binomial standard error. -inf samples count as below every t.
std::vector<EdgeCdfPoint> empirical_cdf_points(std::span<const double> samples,
                                               std::span<const double> t_grid, Method method);

/// Largest |a_i.probability - b_i.probability| over two curves on the same grid.
double sup_distance(std::span<const EdgeCdfPoint> a, std::span<const EdgeCdfPoint> b);

/// Evenly spaced grid lo, lo+step, ..., up to hi inclusive (within 1e-9 step).
std::vector<double> make_grid(double lo, double hi, double step);

}  // namespace gedge
