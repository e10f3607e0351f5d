#pragma once

// Edge-limit kernel of the real Ginibre ensemble and the one-point functions
// that enter the finite-rank correction of the gap probability.

namespace gedge {

/// T(x, y) = (1/pi) int_0^inf exp(-(x+u)^2) exp(-(y+u)^2) du, evaluated as
/// exp(-(x-y)^2 / 2) erfc((x+y)/sqrt2) / (2 sqrt(2 pi)). Returns 0 on underflow.
double kernel_T(double x, double y);

/// g(x) = exp(-x^2) / sqrt(pi), the N(0, 1/2) density.
double density_g(double x);

/// G(x) = int_{-inf}^x g, i.e. erfc(-x) / 2.
double cdf_G(double x);

}  // namespace gedge
