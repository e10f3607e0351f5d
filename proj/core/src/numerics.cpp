#include "gedge/numerics.hpp"

#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gedge {

double erfc_precise(double x) { return std::erfc(x); }

QuadratureRule gauss_legendre_rule(int n, double lower, double upper) {
  if (n < 2) {
    throw std::invalid_argument("gauss_legendre_rule: need at least 2 nodes, got " +
                                std::to_string(n));
  }
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw std::invalid_argument("gauss_legendre_rule: interval [" + std::to_string(lower) +
                                ", " + std::to_string(upper) + "] is empty or not finite");
  }

  QuadratureRule rule;
  rule.lower = lower;
  rule.upper = upper;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  const double mid = 0.5 * (upper + lower);
  const double half = 0.5 * (upper - lower);
  const int m = (n + 1) / 2;

  for (int i = 0; i < m; ++i) {
    // Tricomi initial guess for the i-th largest root of P_n.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) <= 1e-15) break;
    }
    // Weight from the derivative at the converged root.
    double p0 = 1.0;
    double p1 = z;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);

    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = mid;
  return rule;
}

double zeta_three_halves() {
  static const double value = boost::math::zeta(1.5);
  return value;
}

double key_constant() { return zeta_three_halves() / kSqrt2Pi; }

}  // namespace gedge
