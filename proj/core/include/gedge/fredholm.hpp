#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

#include "gedge/cdf_point.hpp"
#include "gedge/numerics.hpp"

namespace gedge {

inline constexpr int kDefaultNodes = 256;
inline constexpr double kSupportedTMin = -14.0;
inline constexpr double kSupportedTMax = 10.0;

/// Nystrom discretization of T restricted to (t, cutoff).
///
/// `matrix` holds sqrt(w_i) T(x_i, x_j) sqrt(w_j), which is exactly symmetric
/// and has the same spectrum as the (non-symmetric) Nystrom matrix T(x_i, x_j) w_j.
/// `eigenvalues` are its eigenvalues in ascending order.
struct DiscretizedOperator {
  double t = 0.0;
  double cutoff = 0.0;
  QuadratureRule rule;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd eigenvalues;
  int widenings = 0;

  std::size_t size() const noexcept { return rule.size(); }
  double trace() const { return matrix.trace(); }
  double spectral_radius() const { return eigenvalues.size() ? eigenvalues.maxCoeff() : 0.0; }
};

/// Builds the operator on (t, max(t, 0) + 6). If T(cutoff, x_j) is not below
/// 1e-14 for every node the cutoff is widened by 2, at most three times, and
/// NumericalError is thrown after that.
DiscretizedOperator discretize(double t, int n_nodes = kDefaultNodes);

/// log det(I - T chi_t) = sum log(1 - lambda_i). Throws if some eigenvalue
/// reaches 1 - 1e-12.
double log_det(const DiscretizedOperator& op);

/// Solves (I - T chi_t) f = rhs at the quadrature nodes.
std::vector<double> solve_resolvent(const DiscretizedOperator& op,
                                    const std::function<double(double)>& rhs);

/// a_t = int_t^inf G(x) ((I - T chi_t)^{-1} g)(x) dx.
double a_t(const DiscretizedOperator& op);

/// P(lambda_max < t) = sqrt(det(I - T chi_t) (1 - a_t)) with a grid-halving
/// error estimate. t must lie in [-14, 10].
EdgeCdfPoint cdf_at(double t, int n_nodes = kDefaultNodes);

/// cdf_at over an ascending grid, evaluated on up to `workers` threads.
std::vector<EdgeCdfPoint> cdf_curve(std::span<const double> t_grid,
                                    int n_nodes = kDefaultNodes, unsigned workers = 1);

}  // namespace gedge
