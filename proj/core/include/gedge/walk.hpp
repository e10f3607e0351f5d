#pragma once

// Monte Carlo engine for the random-walk representation of the edge law.
//
// The walk B_n has N(0, v) increments (v = 1/2 for the main walk). Two
// stopping times are tracked:
//   tau_0 = first even n with B_n >= 0,
//   tau_t = first odd n with B_n <= t,
// and I = min of B over odd times up to the current time.
//
// Functionals of the form E(X delta_0(B_{tau_0})) are estimated by
// Rao-Blackwellization: at every odd time 2n-1 still before the exit, the path
// adds X times the one-step density of reaching 0, g(B_{2n-1}). Each path
// has its own engine seeded from (seed, path_index), so estimates do not
// depend on the worker count and different barriers share paths.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "gedge/cdf_point.hpp"
#include "gedge/parallel.hpp"

namespace gedge {

inline constexpr std::uint64_t kDefaultMaxSteps = 1'000'000'000'000ULL;

struct WalkConfig {
  double increment_variance = 0.5;
  double start = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = kDefaultMaxSteps;
  unsigned workers = 1;

  /// Throws std::invalid_argument on a non-positive variance, a non-finite
  /// start, or max_steps == 0.
  void validate() const;
};

/// Mean and standard error of a Monte Carlo functional, with the number of
/// paths that reached max_steps before tau_0. Probabilities leave censored
/// paths out; delta_0 functionals average the sums accumulated up to
/// max_steps over every path.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_paths = 0;
  std::uint64_t n_censored = 0;

  /// At most one path in 10^4 censored.
  bool valid() const noexcept {
    return n_paths > 0 && static_cast<double>(n_censored) < 1e-4 * static_cast<double>(n_paths);
  }
};

/// How long a single path runs.
enum class StopRule {
  first_exit,  ///< stop at tau_0 ^ tau_t
  ladder,      ///< run to tau_0, recording tau_t on the way
};

/// Everything one path reports.
struct StoppingOutcome {
  std::optional<std::uint64_t> tau_0;
  std::optional<std::uint64_t> tau_t;
  /// Minimum over visited odd times. Exact until the path takes a deep-excursion
  /// jump; paths only jump once the minimum can no longer change any weight.
  double running_odd_min = std::numeric_limits<double>::infinity();
  double rb_delta0_sum = 0.0;        ///< sum of g(B_{2n-1})
  double rb_weighted_sum = 0.0;      ///< sum of g(B_{2n-1}) (I - t)_+
  double rb_max_weighted_sum = 0.0;  ///< sum of g(B_{2n-1}) max(t, I)
  double exit_position = 0.0;        ///< B at the time the path stopped
  std::uint64_t steps = 0;

  bool censored() const noexcept { return !tau_0 && !tau_t; }
  bool barrier_first() const noexcept {
    return tau_t && (!tau_0 || *tau_t < *tau_0);
  }
};

/// Simulates path `path_index` against barrier t (pass -inf for no barrier).
///
/// Under StopRule::ladder a path that is far below 0 with no weight left to
/// track jumps, via the exact Brownian first-passage time, to the next integer
/// time after it climbs back to a shelf level where one-step densities are
/// still below exp(-100). This keeps the heavy-tailed tau_0 cheap.
StoppingOutcome simulate_path(double t, StopRule rule, const WalkConfig& cfg,
                              std::uint64_t path_index);

/// Summary of a first-exit ensemble (paths stopped at tau_0 ^ tau_t).
struct ExitEnsemble {
  double t = 0.0;
  std::uint64_t n_paths = 0;
  std::uint64_t n_barrier_first = 0;  ///< tau_t < tau_0
  std::uint64_t n_zero_first = 0;     ///< tau_0 < tau_t
  std::uint64_t n_censored = 0;
  CoMoments exit_and_weight;  ///< x = 1{tau_t < tau_0}, y = sum g (I - t)_+
  Moments weighted_all;       ///< sum g (I - t)_+ including censored paths
  Moments exit_position;      ///< B_tau

  void merge(const ExitEnsemble& o);
};

ExitEnsemble run_exit_ensemble(double t, std::uint64_t n_paths, const WalkConfig& cfg);

/// Summary of a ladder ensemble (paths run to tau_0; barrier t only recorded).
struct LadderEnsemble {
  double t = 0.0;
  std::uint64_t n_paths = 0;
  std::uint64_t n_barrier_first = 0;
  std::uint64_t n_censored = 0;  ///< no tau_0 within max_steps
  Moments delta0;                ///< over all paths
  Moments weighted;
  Moments max_weighted;
  Moments ladder_height;  ///< B_{tau_0}, completed paths only
  /// max over paths of |sum g (I-t)_+ - (sum g max(t,I) - t sum g)|
  double max_identity_residual = 0.0;

  void merge(const LadderEnsemble& o);
};

LadderEnsemble run_ladder_ensemble(double t, std::uint64_t n_paths, const WalkConfig& cfg);

/// P(tau_t < tau_0) for t < 0.
McEstimate estimate_exit_prob(double t, std::uint64_t n_paths, const WalkConfig& cfg);

/// P(tau_t < tau_0) at several barriers on one shared ensemble. The events
/// are nested, so each path only runs to the lowest barrier.
struct ExitProfile {
  std::vector<double> barriers;          ///< strictly decreasing, negative
  std::uint64_t n_paths = 0;
  std::uint64_t n_censored = 0;
  std::vector<Moments> exit_prob;        ///< indicator of tau_t < tau_0 per barrier
  /// Per-path |t_{j+1}| 1{..} - |t_j| 1{..}; its mean is d(t_j) - d(t_{j+1})
  /// for the deviation d(t) = 1/sqrt2 - |t| P(tau_t < tau_0).
  std::vector<Moments> deviation_step;

  void merge(const ExitProfile& o);
};

ExitProfile exit_profile(std::span<const double> barriers, std::uint64_t n_paths,
                         const WalkConfig& cfg);

/// E(delta_0(B_{tau_0})) for the main walk started at 0; the target is
/// zeta(3/2)/sqrt(2 pi).
McEstimate estimate_delta0(std::uint64_t n_paths, const WalkConfig& cfg);

/// E((I_{tau_0} - t)_+ delta_0(B_{tau_0})), which equals -log det(I - T chi_t).
McEstimate estimate_weighted_delta0(double t, std::uint64_t n_paths, const WalkConfig& cfg);

struct McCdf {
  EdgeCdfPoint point;
  McEstimate exit_prob;
  McEstimate weighted;
  double covariance = 0.0;  ///< Cov of the two sample means
};

/// sqrt(P(tau_t < tau_0)) exp(-E((I - t)_+ delta_0) / 2) on one shared
/// ensemble, with a delta-method standard error. Rejects t > 2.
McCdf cdf_mc_detail(double t, std::uint64_t n_paths, const WalkConfig& cfg);

/// As cdf_mc_detail; throws NumericalError when the estimate is censored.
EdgeCdfPoint cdf_mc(double t, std::uint64_t n_paths, const WalkConfig& cfg);

/// The CDF computed twice on one ladder ensemble: through (I - t)_+ and
/// through exp(t E delta_0 / 2) exp(-E(max(t, I) delta_0) / 2).
struct ProbIdentity {
  double via_positive_part = 0.0;
  double via_max = 0.0;
  double max_pathwise_residual = 0.0;
  LadderEnsemble ensemble;
};

ProbIdentity prob_identity_check(double t, std::uint64_t n_paths, const WalkConfig& cfg);

/// Sample mean of B_tau on a first-exit ensemble (optional stopping gives 0).
McEstimate wald_check(double t, std::uint64_t n_paths, const WalkConfig& cfg);

/// Mean ladder height E(B_{tau_0}) with no lower barrier (1/sqrt2 for the main walk).
McEstimate ladder_height_check(std::uint64_t n_paths, const WalkConfig& cfg);

/// Fraction of Gaussian bridges of length n (N(0,1) increments, B_n = 0)
/// whose interior stays strictly negative. Equals 1/n.
McEstimate cyclic_lemma_check(int n, std::uint64_t n_paths, std::uint64_t seed,
                              unsigned workers = 1);

/// E_y(delta_0(B_{tau_0})) for the N(0,1) walk started at y < 0 with
/// tau_0 = inf{n : B_n > 0}; tends to sqrt2 as y -> -inf.
McEstimate lotov_check(double y, std::uint64_t n_paths, std::uint64_t seed,
                       unsigned workers = 1, std::uint64_t max_steps = kDefaultMaxSteps);

/// Empirical C in P(tau_t < tau_0) = (1 - C |t|^{-1/2}) / (sqrt2 |t|).
double fit_exit_constant(double t, double exit_prob);

}  // namespace gedge
