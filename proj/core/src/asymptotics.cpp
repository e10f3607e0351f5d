#include "gedge/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gedge/error.hpp"
#include "gedge/numerics.hpp"
#include "gedge/parallel.hpp"

namespace gedge {
namespace {

constexpr double kBoundSlack = 1e-12;

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double residual_max = 0.0;
};

Line fit_line(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line line;
  line.slope = sxy / sxx;
  line.intercept = my - line.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (line.intercept + line.slope * x[i]);
    rss += r * r;
    line.residual_max = std::max(line.residual_max, std::abs(r));
  }
  line.slope_se = x.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
  return line;
}

}  // namespace

double left_tail_rate() { return -0.5 * key_constant(); }

RightTailReport right_tail_check(std::span<const double> t_grid, int n_nodes) {
  if (t_grid.empty()) throw std::invalid_argument("right_tail_check: empty grid");
  RightTailReport report;
  for (double t : t_grid) {
    if (!(t >= 1.5 && t <= 4.0)) {
      throw std::invalid_argument("right_tail_check: t = " + std::to_string(t) +
                                  " outside [1.5, 4]");
    }
    RightTailPoint p;
    p.t = t;
    p.probability = cdf_at(t, n_nodes).probability;
    p.approximation = 1.0 - 0.25 * erfc_precise(t);
    p.ratio = std::abs(p.probability - p.approximation) / std::exp(-2.0 * t * t);
    p.a_t = a_t(discretize(t, n_nodes));
    p.a_t_ratio = std::abs(p.a_t / (0.5 * erfc_precise(t)) - 1.0) / std::exp(-t * t);
    report.max_ratio = std::max(report.max_ratio, p.ratio);
    report.max_a_t_ratio = std::max(report.max_a_t_ratio, p.a_t_ratio);
    report.points.push_back(p);
  }
  return report;
}

TailFitReport left_tail_fit(double t_lo, double t_hi, int n_nodes, unsigned workers) {
  if (!(t_lo >= kSupportedTMin && t_lo < t_hi && t_hi <= -6.0)) {
    throw std::invalid_argument("left_tail_fit: need -14 <= t_lo < t_hi <= -6");
  }
  TailFitReport report;
  report.t_lo = t_lo;
  report.t_hi = t_hi;
  report.target_slope = left_tail_rate();
  for (double t = t_lo; t <= t_hi + 1e-9; t += 1.0) report.t.push_back(t);
  if (report.t.back() < t_hi - 1e-9) report.t.push_back(t_hi);
  if (report.t.size() < 2) throw std::invalid_argument("left_tail_fit: window too narrow");

  const std::size_t m = report.t.size();
  std::vector<double> abs_t(m), log_p(m), log_d(m);
  parallel_for(m, workers, [&](std::size_t i) {
    const double t = report.t[i];
    const double p = cdf_at(t, n_nodes).probability;
    if (!(p > 0.0)) {
      throw NumericalError("asymptotics", "probability underflows at t = " + std::to_string(t));
    }
    abs_t[i] = std::abs(t);
    log_p[i] = std::log(p);
    log_d[i] = log_det(discretize(t, n_nodes));
  });

  const Line lp = fit_line(abs_t, log_p);
  report.slope = lp.slope;
  report.intercept = lp.intercept;
  report.slope_std_error = lp.slope_se;
  report.residual_max = lp.residual_max;
  report.endpoint_slope = (log_p.front() - log_p.back()) / (abs_t.front() - abs_t.back());
  report.log_det_slope = fit_line(abs_t, log_d).slope;
  std::vector<double> log_d_adjusted(m);
  for (std::size_t i = 0; i < m; ++i) log_d_adjusted[i] = log_d[i] - std::log(abs_t[i]);
  report.log_det_rate = fit_line(abs_t, log_d_adjusted).slope;
  report.log_probability = log_p;
  return report;
}

std::vector<OperatorBound> operator_bound_audit(std::span<const double> t_grid, int n_nodes) {
  std::vector<OperatorBound> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t >= kSupportedTMin && t <= 4.0)) {
      throw std::invalid_argument("operator_bound_audit: t = " + std::to_string(t) +
                                  " outside [-14, 4]");
    }
    const DiscretizedOperator op = discretize(t, n_nodes);
    OperatorBound b;
    b.t = t;
    b.trace = op.trace();
    b.spectral_radius = op.spectral_radius();
    if (t >= 0.0) {
      b.bound = 0.125 * std::exp(-2.0 * t * t);
      b.trace_bound_ok = b.trace <= b.bound + kBoundSlack;
      b.radius_bound_ok = b.spectral_radius <= b.bound + kBoundSlack;
    } else {
      b.bound = 1.0;
      b.trace_bound_ok = true;
      b.radius_bound_ok = b.spectral_radius < 1.0;
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace gedge
