#include "gedge/abm.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gedge/parallel.hpp"

namespace gedge {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Step {
  std::vector<double> moved;
  std::vector<double> survivors;
};

/// One time step. Pairs are matched left to right against a stack of
/// survivors; when particle i has crossed the stack top and is itself crossed
/// by i + 1, the pair with the smaller pre-step gap is removed.
void step_once(ParticleSystem& sys, double dt, Step& work) {
  boost::random::normal_distribution<double> normal;
  const double sd = std::sqrt(sys.diffusivity * dt);
  const std::vector<double>& x = sys.positions;
  const std::size_t m = x.size();

  work.moved.resize(m);
  for (std::size_t i = 0; i < m; ++i) work.moved[i] = x[i] + sd * normal(sys.rng);
  const std::vector<double>& y = work.moved;

  std::vector<std::size_t> stack;
  stack.reserve(m);
  for (std::size_t i = 0; i < m;) {
    if (!stack.empty() && y[stack.back()] >= y[i]) {
      const std::size_t top = stack.back();
      if (i + 1 < m && y[i] >= y[i + 1] && x[i + 1] - x[i] < x[i] - x[top]) {
        i += 2;
      } else {
        stack.pop_back();
        i += 1;
      }
      ++sys.annihilated_pairs;
      continue;
    }
    stack.push_back(i);
    ++i;
  }

  work.survivors.clear();
  for (std::size_t j : stack) work.survivors.push_back(y[j]);
  if ((m - work.survivors.size()) % 2 != 0) ++sys.odd_decrements;
  sys.positions.swap(work.survivors);
}

}  // namespace

double ParticleSystem::density() const noexcept {
  if (positions.size() < 2) return 0.0;
  const double span = positions.back() - positions.front();
  return span > 0.0 ? static_cast<double>(positions.size() - 1) / span
                    : std::numeric_limits<double>::infinity();
}

ParticleSystem init_step(double intensity, double left_extent, std::uint64_t seed) {
  if (!(intensity >= 1.0) || !std::isfinite(intensity)) {
    throw std::invalid_argument("init_step: intensity must be at least 1");
  }
  if (!(left_extent > 0.0) || !std::isfinite(left_extent)) {
    throw std::invalid_argument("init_step: left_extent must be positive");
  }
  if (intensity * left_extent > static_cast<double>(kMaxParticles)) {
    std::ostringstream msg;
    msg << "init_step: expected " << intensity * left_extent << " particles exceeds the cap of "
        << kMaxParticles;
    throw std::invalid_argument(msg.str());
  }

  ParticleSystem sys;
  sys.rng = Xoshiro256(seed);
  sys.left_boundary = -left_extent;
  sys.intensity = intensity;
  boost::random::exponential_distribution<double> gap(intensity);
  sys.positions.reserve(static_cast<std::size_t>(intensity * left_extent * 1.1) + 16);
  for (double x = -left_extent + gap(sys.rng); x <= 0.0; x += gap(sys.rng)) {
    if (sys.positions.empty() || x > sys.positions.back()) sys.positions.push_back(x);
  }
  return sys;
}

double max_resolved_dt(const ParticleSystem& sys) noexcept {
  const double live = sys.density();
  const double rho = sys.intensity > 0.0 ? std::min(sys.intensity, live) : live;
  if (rho == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (4.0 * rho * rho * sys.diffusivity);
}

void evolve(ParticleSystem& sys, double duration, double dt) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("evolve: duration must be positive");
  }
  if (!(dt > 0.0) || dt > duration) {
    throw std::invalid_argument("evolve: need 0 < dt <= duration");
  }
  const double end = sys.time + duration;
  Step work;
  while (sys.time < end) {
    const double h = std::min(dt, end - sys.time);
    if (h > max_resolved_dt(sys)) {
      std::ostringstream msg;
      msg << "evolve: dt = " << h << " does not resolve density " << sys.density()
          << " (limit " << max_resolved_dt(sys) << ")";
      throw std::invalid_argument(msg.str());
    }
    step_once(sys, h, work);
    sys.time = end - sys.time <= dt ? end : sys.time + h;
  }
}

std::vector<EdgeCdfPoint> RightmostLaw::rescaled(std::span<const double> u_grid) const {
  std::vector<double> u(maxima.size());
  for (std::size_t i = 0; i < maxima.size(); ++i) u[i] = maxima[i] / scale;
  return empirical_cdf_points(u, u_grid, Method::abm_empirical);
}

RightmostLaw rightmost_law(const AbmConfig& cfg, std::span<const double> x_grid) {
  if (!(cfg.s > 0.0) || !std::isfinite(cfg.s)) {
    throw std::invalid_argument("rightmost_law: s must be positive");
  }
  if (cfg.n_runs < 1000) throw std::invalid_argument("rightmost_law: need at least 1000 runs");
  if (!(cfg.dt > 0.0) || cfg.dt > cfg.s) {
    throw std::invalid_argument("rightmost_law: need 0 < dt <= s");
  }
  const double extent = cfg.left_extent > 0.0 ? cfg.left_extent : 20.0 * std::sqrt(cfg.s);
  if (extent < 20.0 * std::sqrt(cfg.s) * (1.0 - 1e-12)) {
    throw std::invalid_argument("rightmost_law: left_extent must be at least 20 sqrt(s)");
  }

  struct Run {
    double max = kNegInf;
    bool contaminated = false;
    std::uint64_t odd = 0;
  };
  std::vector<Run> runs(cfg.n_runs);
  parallel_for(cfg.n_runs, cfg.workers, [&](std::size_t r) {
    ParticleSystem sys = init_step(cfg.intensity, extent, derive_seed(cfg.seed, r));
    Step work;
    while (sys.time < cfg.s && !sys.positions.empty()) {
      const double h = std::min({cfg.dt, max_resolved_dt(sys), cfg.s - sys.time});
      step_once(sys, h, work);
      sys.time = cfg.s - sys.time <= h ? cfg.s : sys.time + h;
    }
    Run& out = runs[r];
    out.odd = sys.odd_decrements;
    if (!sys.positions.empty()) {
      out.max = sys.positions.back();
      out.contaminated = out.max < sys.left_boundary + extent / 10.0;
    }
  });

  RightmostLaw law;
  law.s = cfg.s;
  law.scale = std::sqrt(4.0 * cfg.s);
  law.maxima.reserve(runs.size());
  for (const Run& r : runs) {
    law.maxima.push_back(r.max);
    law.boundary_contaminated += r.contaminated;
    law.odd_decrements += r.odd;
    law.empty_runs += r.max == kNegInf;
  }
  if (static_cast<double>(law.boundary_contaminated) > 0.01 * static_cast<double>(cfg.n_runs)) {
    law.warnings.push_back(std::to_string(law.boundary_contaminated) + " of " +
                           std::to_string(cfg.n_runs) +
                           " runs have their rightmost particle near the left boundary");
  }
  if (!x_grid.empty()) law.points = empirical_cdf_points(law.maxima, x_grid, Method::abm_empirical);
  return law;
}

}  // namespace gedge
