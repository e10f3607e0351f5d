#pragma once

// Annihilating Brownian motions started from a dense Poisson configuration on
// the negative half-line, and the law of the rightmost particle.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gedge/cdf_point.hpp"
#include "gedge/rng.hpp"

namespace gedge {

inline constexpr double kAbmDiffusivity = 2.0;
inline constexpr std::uint64_t kMaxParticles = 10'000'000;

struct ParticleSystem {
  std::vector<double> positions;  ///< strictly increasing
  double time = 0.0;
  double diffusivity = kAbmDiffusivity;  ///< variance per unit time
  double left_boundary = 0.0;            ///< left end of the initial interval
  /// Nominal density the step size must resolve; 0 means the live density only.
  double intensity = 0.0;
  std::uint64_t annihilated_pairs = 0;
  std::uint64_t odd_decrements = 0;  ///< steps whose count change was odd; stays 0
  Xoshiro256 rng{0};

  std::size_t alive_count() const noexcept { return positions.size(); }
  /// (count - 1) / occupied span, or 0 with fewer than two particles.
  double density() const noexcept;
};

/// Poisson(intensity) points on [-left_extent, 0]. Rejects intensity < 1 and
/// configurations with an expected count above 10^7.
ParticleSystem init_step(double intensity, double left_extent, std::uint64_t seed);

/// Largest step that resolves typical gaps: 1 / (4 rho^2 diffusivity) with rho
/// the live density, capped by `intensity` when that is set.
double max_resolved_dt(const ParticleSystem& sys) noexcept;

/// Advances by `duration` in steps of `dt` (the last one shortened). Each step
/// adds N(0, diffusivity dt) to every particle, then removes pairs whose order
/// swapped. Rejects dt > duration and dt > max_resolved_dt at any step.
void evolve(ParticleSystem& sys, double duration, double dt);

struct AbmConfig {
  double intensity = 16.0;
  double left_extent = 0.0;  ///< 0 selects 20 sqrt(s)
  double s = 1.0;
  std::uint64_t n_runs = 2000;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct RightmostLaw {
  double s = 0.0;
  double scale = 0.0;             ///< sqrt(4 s)
  std::vector<double> maxima;     ///< X_max per run, -inf for an empty system
  std::vector<EdgeCdfPoint> points;  ///< empirical CDF at the requested x grid
  std::uint64_t boundary_contaminated = 0;
  std::uint64_t odd_decrements = 0;
  std::uint64_t empty_runs = 0;
  std::vector<std::string> warnings;

  /// Empirical CDF of X_max / sqrt(4 s) on `u_grid`.
  std::vector<EdgeCdfPoint> rescaled(std::span<const double> u_grid) const;
};

/// Runs n_runs >= 10^3 independent systems to time s. Steps are
/// min(dt, max_resolved_dt), so the dense start is refined automatically.
/// A run counts as boundary contaminated when its rightmost particle lies
/// within left_extent / 10 of the left boundary.
RightmostLaw rightmost_law(const AbmConfig& cfg, std::span<const double> x_grid);

}  // namespace gedge
