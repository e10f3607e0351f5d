#include "gedge/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gedge/error.hpp"
#include "gedge/kernel.hpp"
#include "gedge/parallel.hpp"

namespace gedge {
namespace {

constexpr double kCutoffMargin = 6.0;
constexpr double kCutoffWidening = 2.0;
constexpr int kMaxWidenings = 3;
constexpr double kBoundaryTolerance = 1e-14;

DiscretizedOperator build(double t, int n_nodes) {
  DiscretizedOperator op;
  op.t = t;
  op.cutoff = std::max(t, 0.0) + kCutoffMargin;

  for (;;) {
    op.rule = gauss_legendre_rule(n_nodes, t, op.cutoff);
    double boundary = 0.0;
    for (double x : op.rule.nodes) boundary = std::max(boundary, kernel_T(op.cutoff, x));
    if (boundary < kBoundaryTolerance) break;
    if (op.widenings == kMaxWidenings) {
      std::ostringstream msg;
      msg << "kernel still " << boundary << " at cutoff " << op.cutoff << " for t = " << t
          << " after " << kMaxWidenings << " widenings";
      throw NumericalError("fredholm", msg.str());
    }
    op.cutoff += kCutoffWidening;
    ++op.widenings;
  }

  const auto n = static_cast<Eigen::Index>(n_nodes);
  Eigen::VectorXd root_w(n);
  for (Eigen::Index i = 0; i < n; ++i) root_w[i] = std::sqrt(op.rule.weights[i]);

  op.matrix.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double v = root_w[i] * kernel_T(op.rule.nodes[i], op.rule.nodes[j]) * root_w[j];
      op.matrix(i, j) = v;
      op.matrix(j, i) = v;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(op.matrix, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("fredholm", "symmetric eigensolver failed at t = " + std::to_string(t));
  }
  op.eigenvalues = eig.eigenvalues();
  return op;
}

double probability_from(const DiscretizedOperator& op) {
  const double det = std::exp(log_det(op));
  const double complement = std::clamp(1.0 - a_t(op), 0.0, 1.0);
  return std::clamp(std::sqrt(det * complement), 0.0, 1.0);
}

}  // namespace

DiscretizedOperator discretize(double t, int n_nodes) {
  if (!std::isfinite(t)) throw std::invalid_argument("discretize: t must be finite");
  if (n_nodes < 16) {
    throw std::invalid_argument("discretize: need at least 16 nodes, got " +
                                std::to_string(n_nodes));
  }
  return build(t, n_nodes);
}

double log_det(const DiscretizedOperator& op) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < op.eigenvalues.size(); ++i) {
    const double lambda = op.eigenvalues[i];
    if (lambda >= 1.0 - 1e-12) {
      throw NumericalError("fredholm", "eigenvalue " + std::to_string(lambda) +
                                           " too close to 1 at t = " + std::to_string(op.t));
    }
    sum += std::log1p(-lambda);
  }
  // Round-off in eigenvalues of order -1e-17 can push the sum slightly positive.
  return std::min(sum, 0.0);
}

std::vector<double> solve_resolvent(const DiscretizedOperator& op,
                                    const std::function<double(double)>& rhs) {
  const auto n = static_cast<Eigen::Index>(op.size());
  Eigen::VectorXd root_w(n), b(n), scaled(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    root_w[i] = std::sqrt(op.rule.weights[i]);
    b[i] = rhs(op.rule.nodes[i]);
    if (!std::isfinite(b[i])) {
      throw std::invalid_argument("solve_resolvent: rhs not finite at node " +
                                  std::to_string(op.rule.nodes[i]));
    }
    scaled[i] = root_w[i] * b[i];
  }

  // (I - K W) f = b  <=>  (I - A) (sqrt(W) f) = sqrt(W) b, A symmetric positive.
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - op.matrix;
  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("fredholm", "I - T chi_t is not positive definite at t = " +
                                         std::to_string(op.t));
  }
  const Eigen::VectorXd f_tilde = llt.solve(scaled);
  const Eigen::VectorXd a_f = op.matrix * f_tilde;

  std::vector<double> f(n);
  double residual = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    f[i] = f_tilde[i] / root_w[i];
    residual = std::max(residual, std::abs(f[i] - a_f[i] / root_w[i] - b[i]));
  }
  const double scale = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
  if (residual > 1e-10 * scale) {
    throw NumericalError("fredholm", "resolvent residual " + std::to_string(residual) +
                                         " exceeds tolerance at t = " + std::to_string(op.t));
  }
  return f;
}

double a_t(const DiscretizedOperator& op) {
  const std::vector<double> f = solve_resolvent(op, density_g);
  double sum = 0.0;
  for (std::size_t i = 0; i < op.size(); ++i) {
    sum += op.rule.weights[i] * cdf_G(op.rule.nodes[i]) * f[i];
  }
  if (sum < -1e-10 || sum > 1.0 + 1e-10) {
    throw NumericalError("fredholm", "a_t = " + std::to_string(sum) + " outside [0, 1] at t = " +
                                         std::to_string(op.t));
  }
  return sum;
}

EdgeCdfPoint cdf_at(double t, int n_nodes) {
  if (!(t >= kSupportedTMin && t <= kSupportedTMax)) {
    throw std::invalid_argument("cdf_at: t = " + std::to_string(t) +
                                " outside the supported range [-14, 10]");
  }
  if (n_nodes < 16) {
    throw std::invalid_argument("cdf_at: need at least 16 nodes, got " + std::to_string(n_nodes));
  }
  const double fine = probability_from(build(t, n_nodes));
  const double coarse = probability_from(build(t, std::max(n_nodes / 2, 2)));
  return {t, fine, Method::fredholm, std::abs(fine - coarse)};
}

std::vector<EdgeCdfPoint> cdf_curve(std::span<const double> t_grid, int n_nodes,
                                    unsigned workers) {
  if (t_grid.empty()) throw std::invalid_argument("cdf_curve: empty grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!std::isfinite(t_grid[i])) throw std::invalid_argument("cdf_curve: grid not finite");
    if (i > 0 && t_grid[i] < t_grid[i - 1]) {
      throw std::invalid_argument("cdf_curve: grid must be sorted ascending");
    }
  }

  std::vector<EdgeCdfPoint> out(t_grid.size());
  parallel_for(t_grid.size(), workers, [&](std::size_t i) {
    try {
      out[i] = cdf_at(t_grid[i], n_nodes);
    } catch (const NumericalError& e) {
      throw NumericalError("fredholm", "at t = " + std::to_string(t_grid[i]) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("cdf_curve at t = " + std::to_string(t_grid[i]) + ": " +
                                  e.what());
    }
  });

  for (std::size_t i = 1; i < out.size(); ++i) {
    const double slack =
        2.0 * std::max(out[i].error_estimate, out[i - 1].error_estimate) + 1e-15;
    if (out[i].probability < out[i - 1].probability - slack) {
      throw NumericalError("fredholm", "curve not monotone between t = " +
                                           std::to_string(out[i - 1].t) + " and t = " +
                                           std::to_string(out[i].t));
    }
  }
  return out;
}

}  // namespace gedge
