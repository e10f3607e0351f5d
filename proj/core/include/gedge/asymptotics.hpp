#pragma once

// Checks of the tail behaviour of the edge law and of the operator bounds
// that the Fredholm route relies on.

#include <span>
#include <vector>

#include "gedge/fredholm.hpp"

namespace gedge {

/// -zeta(3/2) / (2 sqrt(2 pi)): rate of log P(lambda_max < t) per unit |t|.
double left_tail_rate();

struct RightTailPoint {
  double t = 0.0;
  double probability = 0.0;
  double approximation = 0.0;  ///< 1 - erfc(t) / 4
  double ratio = 0.0;          ///< |probability - approximation| / e^{-2 t^2}
  double a_t = 0.0;
  double a_t_ratio = 0.0;      ///< |a_t / (erfc(t) / 2) - 1| / e^{-t^2}
};

struct RightTailReport {
  std::vector<RightTailPoint> points;
  double max_ratio = 0.0;
  double max_a_t_ratio = 0.0;

  bool passed(double tolerance = 2.0) const noexcept {
    return max_ratio <= tolerance && max_a_t_ratio <= tolerance;
  }
};

/// Grid values must lie in [1.5, 4].
RightTailReport right_tail_check(std::span<const double> t_grid, int n_nodes = kDefaultNodes);

struct TailFitReport {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double slope = 0.0;  ///< least squares, log P against |t|
  double slope_std_error = 0.0;
  double intercept = 0.0;
  double residual_max = 0.0;
  double endpoint_slope = 0.0;  ///< (log P(t_lo) - log P(t_hi)) / (t_hi - t_lo)
  double log_det_slope = 0.0;   ///< least squares, log det(I - T chi_t) against |t|
  /// Least squares of log det(I - T chi_t) - log|t| against |t|; the log|t|
  /// term cancels against log(1 - a_t), so this tends to twice target_slope.
  double log_det_rate = 0.0;
  double target_slope = 0.0;
  std::vector<double> t;
  std::vector<double> log_probability;

  bool passed(double tolerance = 0.02) const noexcept {
    return std::abs(slope - target_slope) <= tolerance;
  }
};

/// Fits on t_lo, t_lo + 1, ... up to t_hi, with -14 <= t_lo < t_hi <= -6.
TailFitReport left_tail_fit(double t_lo, double t_hi, int n_nodes = kDefaultNodes,
                            unsigned workers = 1);

struct OperatorBound {
  double t = 0.0;
  double trace = 0.0;
  double spectral_radius = 0.0;
  double bound = 0.0;  ///< e^{-2t^2} / 8 for t >= 0, 1 otherwise
  bool trace_bound_ok = false;
  bool radius_bound_ok = false;
};

/// For t >= 0 (up to 4) the trace and spectral radius are compared with
/// e^{-2t^2}/8 plus 1e-12; for t < 0 only radius < 1 is checked.
std::vector<OperatorBound> operator_bound_audit(std::span<const double> t_grid,
                                                int n_nodes = kDefaultNodes);

}  // namespace gedge
