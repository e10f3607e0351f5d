#include "gedge/kernel.hpp"

#include <cmath>

#include "gedge/numerics.hpp"

namespace gedge {

double kernel_T(double x, double y) {
  const double d = x - y;
  const double gauss = std::exp(-0.5 * d * d);
  if (gauss == 0.0) return 0.0;
  return gauss * erfc_precise((x + y) / kSqrt2) / (2.0 * kSqrt2Pi);
}

double density_g(double x) { return std::exp(-x * x) / kSqrtPi; }

// erfc(-x)/2 rather than 1 - erfc(x)/2 keeps full relative accuracy for x << 0.
double cdf_G(double x) { return 0.5 * erfc_precise(-x); }

}  // namespace gedge
