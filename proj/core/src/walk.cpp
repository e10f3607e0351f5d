#include "gedge/walk.hpp"

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gedge/error.hpp"
#include "gedge/numerics.hpp"
#include "gedge/rng.hpp"

namespace gedge {
namespace {

using Normal = boost::random::normal_distribution<double>;

constexpr std::uint64_t kMinPaths = 10'000;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream tags keep the walk, bridge and Lotov ensembles on unrelated seeds.
constexpr std::uint64_t kBridgeStream = 0x6272696467650000ULL;
constexpr std::uint64_t kLotovStream = 0x6c6f746f76000000ULL;

void require_paths(std::uint64_t n_paths, const char* where) {
  if (n_paths < kMinPaths) {
    throw std::invalid_argument(std::string(where) + ": need at least 10^4 paths, got " +
                                std::to_string(n_paths));
  }
}

/// Levels for the deep-excursion shortcut of a walk with step variance v.
/// Below `shelf` the one-step density to 0 is < exp(-100) / sqrt(2 pi v).
struct Shelf {
  double shelf;
  double deep;

  explicit Shelf(double v) : shelf(-std::sqrt(200.0 * v)), deep(1.5 * shelf) {}
};

/// Advances a walk that is at `pos` (time `k`, pos < shelf) along the exact
/// Brownian embedding B_{k+s} = pos + sqrt(v) W(s): W first reaches the shelf
/// at sigma = (d / Z)^2, every integer time before that stays below the shelf,
/// and the walk is then sampled at the next integer time. Returns false when
/// that time is past max_steps.
template <class Engine>
bool deep_jump(Engine& eng, Normal& normal, double v, double shelf, double& pos,
               std::uint64_t& k, std::uint64_t max_steps) {
  const double d = (shelf - pos) / std::sqrt(v);
  const double z = normal(eng);
  const double sigma = (d / z) * (d / z);
  const double room = static_cast<double>(max_steps - k);
  if (!(sigma < room - 1.0)) {
    k = max_steps;
    return false;
  }
  const double whole = std::floor(sigma) + 1.0;
  k += static_cast<std::uint64_t>(whole);
  pos = shelf + std::sqrt(v * (whole - sigma)) * normal(eng);
  return true;
}

McEstimate to_estimate(const Moments& m, std::uint64_t n_paths, std::uint64_t n_censored) {
  return {m.mean, m.std_error(), n_paths, n_censored};
}

}  // namespace

void WalkConfig::validate() const {
  if (!(increment_variance > 0.0) || !std::isfinite(increment_variance)) {
    throw std::invalid_argument("WalkConfig: increment_variance must be positive");
  }
  if (!std::isfinite(start)) throw std::invalid_argument("WalkConfig: start must be finite");
  if (max_steps == 0) throw std::invalid_argument("WalkConfig: max_steps must be positive");
}

StoppingOutcome simulate_path(double t, StopRule rule, const WalkConfig& cfg,
                              std::uint64_t path_index) {
  Xoshiro256 eng(derive_seed(cfg.seed, path_index));
  Normal normal;

  const double v = cfg.increment_variance;
  const double sd = std::sqrt(v);
  const double density_scale = 1.0 / std::sqrt(2.0 * std::numbers::pi * v);
  const double inv_two_v = 0.5 / v;
  const Shelf levels(v);
  const bool barrier = t > -kInf;
  const bool first_exit = rule == StopRule::first_exit;

  StoppingOutcome out;
  double pos = cfg.start;
  double low = kInf;
  std::uint64_t k = 0;

  while (k < cfg.max_steps) {
    if (!first_exit && pos < levels.deep && (!barrier || low <= t)) {
      if (!deep_jump(eng, normal, v, levels.shelf, pos, k, cfg.max_steps)) break;
    } else {
      pos += sd * normal(eng);
      ++k;
    }

    if (k & 1U) {
      low = std::min(low, pos);
      if (barrier && !out.tau_t && pos <= t) {
        out.tau_t = k;
        if (first_exit) break;
      }
      if (pos > levels.shelf) {
        const double dens = density_scale * std::exp(-pos * pos * inv_two_v);
        out.rb_delta0_sum += dens;
        if (barrier) {
          out.rb_weighted_sum += dens * std::max(low - t, 0.0);
          out.rb_max_weighted_sum += dens * std::max(t, low);
        }
      }
    } else if (pos >= 0.0) {
      out.tau_0 = k;
      break;
    }
  }

  out.running_odd_min = low;
  out.exit_position = pos;
  out.steps = std::min(k, cfg.max_steps);
  return out;
}

void ExitEnsemble::merge(const ExitEnsemble& o) {
  n_paths += o.n_paths;
  n_barrier_first += o.n_barrier_first;
  n_zero_first += o.n_zero_first;
  n_censored += o.n_censored;
  exit_and_weight.merge(o.exit_and_weight);
  weighted_all.merge(o.weighted_all);
  exit_position.merge(o.exit_position);
}

void LadderEnsemble::merge(const LadderEnsemble& o) {
  n_paths += o.n_paths;
  n_barrier_first += o.n_barrier_first;
  n_censored += o.n_censored;
  delta0.merge(o.delta0);
  weighted.merge(o.weighted);
  max_weighted.merge(o.max_weighted);
  ladder_height.merge(o.ladder_height);
  max_identity_residual = std::max(max_identity_residual, o.max_identity_residual);
}

ExitEnsemble run_exit_ensemble(double t, std::uint64_t n_paths, const WalkConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(t)) throw std::invalid_argument("run_exit_ensemble: t must be finite");
  ExitEnsemble acc =
      run_blocked<ExitEnsemble>(n_paths, cfg.workers, [&](std::uint64_t i, ExitEnsemble& a) {
    const StoppingOutcome path = simulate_path(t, StopRule::first_exit, cfg, i);
    ++a.n_paths;
    a.weighted_all.add(path.rb_weighted_sum);
    if (path.censored()) {
      ++a.n_censored;
      return;
    }
    const bool low_first = path.barrier_first();
    ++(low_first ? a.n_barrier_first : a.n_zero_first);
    a.exit_and_weight.add(low_first ? 1.0 : 0.0, path.rb_weighted_sum);
    a.exit_position.add(path.exit_position);
  });
  acc.t = t;
  return acc;
}

LadderEnsemble run_ladder_ensemble(double t, std::uint64_t n_paths, const WalkConfig& cfg) {
  cfg.validate();
  if (std::isnan(t) || t == kInf) {
    throw std::invalid_argument("run_ladder_ensemble: t must be finite or -inf");
  }
  const bool barrier = std::isfinite(t);
  LadderEnsemble acc =
      run_blocked<LadderEnsemble>(n_paths, cfg.workers, [&](std::uint64_t i, LadderEnsemble& a) {
    const StoppingOutcome path = simulate_path(t, StopRule::ladder, cfg, i);
    ++a.n_paths;
    a.delta0.add(path.rb_delta0_sum);
    if (barrier) {
      a.weighted.add(path.rb_weighted_sum);
      a.max_weighted.add(path.rb_max_weighted_sum);
      const double residual = std::abs(path.rb_weighted_sum -
                                       (path.rb_max_weighted_sum - t * path.rb_delta0_sum));
      a.max_identity_residual = std::max(a.max_identity_residual, residual);
    }
    if (!path.tau_0) {
      ++a.n_censored;
      return;
    }
    if (path.barrier_first()) ++a.n_barrier_first;
    a.ladder_height.add(path.exit_position);
  });
  acc.t = t;
  return acc;
}

McEstimate estimate_exit_prob(double t, std::uint64_t n_paths, const WalkConfig& cfg) {
  if (!(t < 0.0)) throw std::invalid_argument("estimate_exit_prob: t must be negative");
  require_paths(n_paths, "estimate_exit_prob");
  const ExitEnsemble e = run_exit_ensemble(t, n_paths, cfg);
  return to_estimate(e.exit_and_weight.x, e.n_paths, e.n_censored);
}

void ExitProfile::merge(const ExitProfile& o) {
  n_paths += o.n_paths;
  n_censored += o.n_censored;
  if (exit_prob.empty()) {
    exit_prob = o.exit_prob;
    deviation_step = o.deviation_step;
    return;
  }
  for (std::size_t i = 0; i < o.exit_prob.size(); ++i) exit_prob[i].merge(o.exit_prob[i]);
  for (std::size_t i = 0; i < o.deviation_step.size(); ++i) {
    deviation_step[i].merge(o.deviation_step[i]);
  }
}

ExitProfile exit_profile(std::span<const double> barriers, std::uint64_t n_paths,
                         const WalkConfig& cfg) {
  cfg.validate();
  require_paths(n_paths, "exit_profile");
  if (barriers.empty()) throw std::invalid_argument("exit_profile: no barriers");
  for (std::size_t i = 0; i < barriers.size(); ++i) {
    if (!(barriers[i] < 0.0) || !std::isfinite(barriers[i])) {
      throw std::invalid_argument("exit_profile: barriers must be finite and negative");
    }
    if (i > 0 && !(barriers[i] < barriers[i - 1])) {
      throw std::invalid_argument("exit_profile: barriers must be strictly decreasing");
    }
  }
  const std::size_t m = barriers.size();
  const double lowest = barriers.back();

  ExitProfile acc =
      run_blocked<ExitProfile>(n_paths, cfg.workers, [&](std::uint64_t i, ExitProfile& a) {
    if (a.exit_prob.empty()) {
      a.exit_prob.resize(m);
      a.deviation_step.resize(m - 1);
    }
    const StoppingOutcome path = simulate_path(lowest, StopRule::first_exit, cfg, i);
    ++a.n_paths;
    if (path.censored()) {
      ++a.n_censored;
      return;
    }
    // tau_t < tau_0 for a higher barrier t iff the odd-time minimum at the
    // lowest barrier's exit is already <= t.
    double prev = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double hit = path.running_odd_min <= barriers[j] ? 1.0 : 0.0;
      a.exit_prob[j].add(hit);
      const double scaled = std::abs(barriers[j]) * hit;
      if (j > 0) a.deviation_step[j - 1].add(scaled - prev);
      prev = scaled;
    }
  });
  acc.barriers.assign(barriers.begin(), barriers.end());
  return acc;
}

McEstimate estimate_delta0(std::uint64_t n_paths, const WalkConfig& cfg) {
  require_paths(n_paths, "estimate_delta0");
  if (cfg.increment_variance != 0.5 || cfg.start != 0.0) {
    throw std::invalid_argument("estimate_delta0: needs the N(0,1/2) walk started at 0");
  }
  const LadderEnsemble e = run_ladder_ensemble(-kInf, n_paths, cfg);
  return to_estimate(e.delta0, e.n_paths, e.n_censored);
}

McEstimate estimate_weighted_delta0(double t, std::uint64_t n_paths, const WalkConfig& cfg) {
  require_paths(n_paths, "estimate_weighted_delta0");
  if (cfg.increment_variance != 0.5 || cfg.start != 0.0) {
    throw std::invalid_argument("estimate_weighted_delta0: needs the N(0,1/2) walk started at 0");
  }
  // The weight vanishes once the odd-time minimum is below t, so stopping at
  // tau_0 ^ tau_t loses nothing.
  const ExitEnsemble e = run_exit_ensemble(t, n_paths, cfg);
  return to_estimate(e.weighted_all, e.n_paths, e.n_censored);
}

McCdf cdf_mc_detail(double t, std::uint64_t n_paths, const WalkConfig& cfg) {
  if (!std::isfinite(t) || t > 2.0) {
    throw std::invalid_argument("cdf_mc: t = " + std::to_string(t) +
                                " not supported by the walk route (need t <= 2)");
  }
  require_paths(n_paths, "cdf_mc");
  if (cfg.increment_variance != 0.5 || cfg.start != 0.0) {
    throw std::invalid_argument("cdf_mc: needs the N(0,1/2) walk started at 0");
  }
  const ExitEnsemble e = run_exit_ensemble(t, n_paths, cfg);
  const CoMoments& m = e.exit_and_weight;

  McCdf out;
  out.exit_prob = to_estimate(m.x, e.n_paths, e.n_censored);
  out.weighted = to_estimate(m.y, e.n_paths, e.n_censored);
  const double n = static_cast<double>(std::max<std::uint64_t>(m.x.count, 1));
  out.covariance = m.covariance() / n;

  const double p = m.x.mean;
  const double w = m.y.mean;
  const double prob = std::sqrt(p) * std::exp(-0.5 * w);
  double se = 0.0;
  if (p > 0.0) {
    const double dp = prob / (2.0 * p);
    const double dw = -0.5 * prob;
    const double var = dp * dp * m.x.variance() / n + dw * dw * m.y.variance() / n +
                       2.0 * dp * dw * out.covariance;
    se = std::sqrt(std::max(var, 0.0));
  }
  out.point = {t, std::clamp(prob, 0.0, 1.0), Method::monte_carlo, se};
  return out;
}

EdgeCdfPoint cdf_mc(double t, std::uint64_t n_paths, const WalkConfig& cfg) {
  const McCdf detail = cdf_mc_detail(t, n_paths, cfg);
  if (!detail.exit_prob.valid()) {
    throw NumericalError("walk", std::to_string(detail.exit_prob.n_censored) + " of " +
                                     std::to_string(n_paths) + " paths censored at t = " +
                                     std::to_string(t));
  }
  return detail.point;
}

ProbIdentity prob_identity_check(double t, std::uint64_t n_paths, const WalkConfig& cfg) {
  if (!std::isfinite(t)) throw std::invalid_argument("prob_identity_check: t must be finite");
  require_paths(n_paths, "prob_identity_check");
  ProbIdentity out;
  out.ensemble = run_ladder_ensemble(t, n_paths, cfg);
  const LadderEnsemble& e = out.ensemble;
  const double used = static_cast<double>(e.n_paths - e.n_censored);
  const double p = used > 0 ? static_cast<double>(e.n_barrier_first) / used : 0.0;
  out.via_positive_part = std::sqrt(p) * std::exp(-0.5 * e.weighted.mean);
  out.via_max = std::sqrt(p) * std::exp(0.5 * t * e.delta0.mean) *
                std::exp(-0.5 * e.max_weighted.mean);
  out.max_pathwise_residual = e.max_identity_residual;
  return out;
}

McEstimate wald_check(double t, std::uint64_t n_paths, const WalkConfig& cfg) {
  const ExitEnsemble e = run_exit_ensemble(t, n_paths, cfg);
  return to_estimate(e.exit_position, e.n_paths, e.n_censored);
}

McEstimate ladder_height_check(std::uint64_t n_paths, const WalkConfig& cfg) {
  const LadderEnsemble e = run_ladder_ensemble(-kInf, n_paths, cfg);
  return to_estimate(e.ladder_height, e.n_paths, e.n_censored);
}

McEstimate cyclic_lemma_check(int n, std::uint64_t n_paths, std::uint64_t seed,
                              unsigned workers) {
  if (n < 2 || n > 12) {
    throw std::invalid_argument("cyclic_lemma_check: bridge length must be in [2, 12], got " +
                                std::to_string(n));
  }
  if (n_paths == 0) throw std::invalid_argument("cyclic_lemma_check: need at least one bridge");

  struct Acc {
    Moments m;
    void merge(const Acc& o) { m.merge(o.m); }
  };
  const std::uint64_t stream = derive_seed(seed, kBridgeStream);
  const Acc acc = run_blocked<Acc>(n_paths, workers, [&](std::uint64_t i, Acc& a) {
    Xoshiro256 eng(derive_seed(stream, i));
    Normal normal;
    double x[12] = {};
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      x[j] = normal(eng);
      sum += x[j];
    }
    // Recentering the increments conditions the walk on B_n = 0 exactly.
    const double shift = sum / n;
    double partial = 0.0;
    bool negative = true;
    for (int j = 0; j + 1 < n && negative; ++j) {
      partial += x[j] - shift;
      negative = partial < 0.0;
    }
    a.m.add(negative ? 1.0 : 0.0);
  });
  return {acc.m.mean, acc.m.std_error(), n_paths, 0};
}

McEstimate lotov_check(double y, std::uint64_t n_paths, std::uint64_t seed, unsigned workers,
                       std::uint64_t max_steps) {
  if (!(y < 0.0) || !std::isfinite(y)) {
    throw std::invalid_argument("lotov_check: start y must be negative");
  }
  if (n_paths == 0) throw std::invalid_argument("lotov_check: need at least one path");
  if (max_steps == 0) throw std::invalid_argument("lotov_check: max_steps must be positive");

  struct Acc {
    Moments m;
    std::uint64_t censored = 0;
    void merge(const Acc& o) {
      m.merge(o.m);
      censored += o.censored;
    }
  };
  const Shelf levels(1.0);
  const double density_scale = 1.0 / kSqrt2Pi;
  const std::uint64_t stream = derive_seed(seed, kLotovStream);

  const Acc acc = run_blocked<Acc>(n_paths, workers, [&](std::uint64_t i, Acc& a) {
    Xoshiro256 eng(derive_seed(stream, i));
    Normal normal;
    double pos = y;
    double sum = 0.0;
    std::uint64_t k = 0;
    bool exited = false;
    while (k < max_steps) {
      if (pos < levels.deep) {
        if (!deep_jump(eng, normal, 1.0, levels.shelf, pos, k, max_steps)) break;
      } else {
        // Density of B_{k+1} at 0 given B_k = pos.
        sum += density_scale * std::exp(-0.5 * pos * pos);
        pos += normal(eng);
        ++k;
      }
      if (pos > 0.0) {
        exited = true;
        break;
      }
    }
    a.m.add(sum);
    if (!exited) ++a.censored;
  });
  return {acc.m.mean, acc.m.std_error(), n_paths, acc.censored};
}

double fit_exit_constant(double t, double exit_prob) {
  const double at = std::abs(t);
  return (1.0 - kSqrt2 * at * exit_prob) * std::sqrt(at);
}

}  // namespace gedge
