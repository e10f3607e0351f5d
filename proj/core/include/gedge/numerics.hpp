#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

namespace gedge {

inline constexpr double kSqrtPi = 1.7724538509055160273;
inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kSqrt2Pi = 2.5066282746310005024;

/// Gauss-Legendre nodes and weights mapped onto [lower, upper].
///
/// Invariants: nodes strictly increasing and interior, weights positive and
/// summing to (upper - lower), at least two nodes.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lower = 0.0;
  double upper = 0.0;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// Complementary error function, full double precision over the real line.
double erfc_precise(double x);

/// n-point Gauss-Legendre rule on [lower, upper]; exact for polynomials of
/// degree <= 2n - 1. Throws std::invalid_argument for n < 2 or an empty or
/// non-finite interval.
QuadratureRule gauss_legendre_rule(int n, double lower, double upper);

/// Riemann zeta at 3/2 (cached).
double zeta_three_halves();

/// zeta(3/2) / sqrt(2 pi): the expected Rao-Blackwellized exit density at 0.
double key_constant();

}  // namespace gedge
