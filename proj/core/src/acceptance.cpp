#include "gedge/acceptance.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gedge/abm.hpp"
#include "gedge/asymptotics.hpp"
#include "gedge/fredholm.hpp"
#include "gedge/ginibre.hpp"
#include "gedge/numerics.hpp"
#include "gedge/rng.hpp"
#include "gedge/walk.hpp"

namespace gedge {
namespace {

namespace tol {
constexpr double kSigmas = 3.0;
constexpr double kDelta0Seconds = 60.0;
constexpr double kRightTailRatio = 2.0;
constexpr double kLeftTailSlope = 0.02;
constexpr double kLotovFloor = 0.01;
constexpr double kBoundSlack = 1e-12;
constexpr double kGinibreKs = 0.05;
constexpr double kGinibreSeconds = 300.0;
constexpr double kAbmKs = 0.05;
constexpr double kRefinement = 1e-8;
constexpr double kIdentity = 1e-12;
}  // namespace tol

struct Sizes {
  std::uint64_t delta0_paths;
  std::uint64_t route_paths;
  std::uint64_t bridges;
  std::uint64_t exit_paths;
  std::uint64_t lotov_paths;
  std::uint64_t ginibre_samples;
  std::uint64_t abm_runs;
  std::uint64_t identity_paths;
};

constexpr Sizes kFull{1'000'000, 1'000'000, 1'000'000, 10'000'000, 100'000, 5000, 2000, 100'000};
constexpr Sizes kQuick{200'000, 1'000'000, 200'000, 2'000'000, 100'000, 1000, 2000, 20'000};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

struct Context {
  const AcceptanceOptions& opt;
  const Sizes& n;
  unsigned workers;

  std::uint64_t seed(int id) const { return derive_seed(opt.seed, static_cast<std::uint64_t>(id)); }
  WalkConfig walk(int id, unsigned w) const {
    WalkConfig cfg;
    cfg.seed = seed(id);
    cfg.workers = w;
    return cfg;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void key_constant_check(const Context& c, CriterionResult& r) {
  const auto start = std::chrono::steady_clock::now();
  const McEstimate e = estimate_delta0(c.n.delta0_paths, c.walk(1, 1));
  const double elapsed = seconds_since(start);
  const double target = key_constant();
  const double z = (e.mean - target) / e.std_error;
  r.passed = e.valid() && std::abs(z) <= tol::kSigmas && elapsed < tol::kDelta0Seconds;
  r.detail = fmt("E delta0 = %.6f +- %.2e vs %.6f (%+.2f sigma), %llu paths, %.1f s on 1 thread",
                 e.mean, e.std_error, target, z, static_cast<unsigned long long>(e.n_paths),
                 elapsed);
}

void right_tail(const Context&, CriterionResult& r) {
  constexpr std::array<double, 5> grid{1.5, 2.0, 2.5, 3.0, 4.0};
  const RightTailReport rep = right_tail_check(grid);
  double worst_t = 0.0;
  for (const auto& p : rep.points) {
    if (p.ratio == rep.max_ratio) worst_t = p.t;
  }
  r.passed = rep.max_ratio <= tol::kRightTailRatio;
  r.detail = fmt("max |P - (1 - erfc(t)/4)| e^{2t^2} = %.3g at t = %g (limit %g)", rep.max_ratio,
                 worst_t, tol::kRightTailRatio);
}

void left_tail(const Context& c, CriterionResult& r) {
  const TailFitReport rep = left_tail_fit(-12.0, -6.0, kDefaultNodes, c.workers);
  r.passed = rep.passed(tol::kLeftTailSlope);
  r.detail = fmt("slope %.5f +- %.1e vs %.5f (endpoint %.5f, log det rate %.4f)", rep.slope,
                 rep.slope_std_error, rep.target_slope, rep.endpoint_slope, rep.log_det_rate);
}

void route_equivalence(const Context& c, CriterionResult& r) {
  constexpr std::array<double, 4> ts{-4.0, -2.0, 0.0, 1.0};
  r.passed = true;
  std::ostringstream d;
  for (double t : ts) {
    const EdgeCdfPoint fr = cdf_at(t);
    const EdgeCdfPoint mc = cdf_mc(t, c.n.route_paths, c.walk(4, c.workers));
    const double sigma = std::hypot(mc.error_estimate, fr.error_estimate);
    const double z = (mc.probability - fr.probability) / sigma;
    r.passed = r.passed && std::abs(z) <= tol::kSigmas;
    d << fmt("t=%g: %.5f vs %.5f (%+.2fs) ", t, mc.probability, fr.probability, z);
  }
  r.detail = d.str();
}

void cyclic_lemma(const Context& c, CriterionResult& r) {
  constexpr std::array<int, 4> lengths{2, 3, 5, 8};
  r.passed = true;
  std::ostringstream d;
  for (int n : lengths) {
    const McEstimate e = cyclic_lemma_check(n, c.n.bridges, c.seed(5), c.workers);
    const double z = (e.mean - 1.0 / n) / e.std_error;
    r.passed = r.passed && std::abs(z) <= tol::kSigmas;
    d << fmt("n=%d: %.5f (%+.2fs) ", n, e.mean, z);
  }
  r.detail = d.str();
}

void exit_sandwich(const Context& c, CriterionResult& r) {
  constexpr std::array<double, 3> ts{-25.0, -50.0, -100.0};
  const ExitProfile p = exit_profile(ts, c.n.exit_paths, c.walk(6, c.workers));
  r.passed = static_cast<double>(p.n_censored) < 1e-4 * static_cast<double>(p.n_paths);
  std::ostringstream d;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const double at = std::abs(ts[j]);
    const double upper = 1.0 / (kSqrt2 * at);
    const Moments& m = p.exit_prob[j];
    r.passed = r.passed && m.mean <= upper + tol::kSigmas * m.std_error();
    d << fmt("t=%g: |t|p=%.5f dev=%.4f C=%.3f; ", ts[j], at * m.mean, 1.0 / kSqrt2 - at * m.mean,
             fit_exit_constant(ts[j], m.mean));
  }
  for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
    const Moments& s = p.deviation_step[j];
    r.passed = r.passed && s.mean > 0.0;
    d << fmt("drop %g->%g = %.4f +- %.4f; ", ts[j], ts[j + 1], s.mean, s.std_error());
  }
  r.detail = d.str();
}

void lotov(const Context& c, CriterionResult& r) {
  const McEstimate e = lotov_check(-5.0, c.n.lotov_paths, c.seed(7), c.workers);
  const double allowed = std::max(tol::kSigmas * e.std_error, tol::kLotovFloor);
  r.passed = e.valid() && std::abs(e.mean - kSqrt2) <= allowed;
  r.detail = fmt("E_{-5} delta0 = %.5f +- %.1e vs sqrt2 = %.5f (allowed %.3f)", e.mean,
                 e.std_error, kSqrt2, allowed);
}

void operator_bounds(const Context&, CriterionResult& r) {
  constexpr std::array<double, 6> grid{0.0, 0.5, 1.0, 2.0, -4.0, -10.0};
  r.passed = true;
  std::ostringstream d;
  for (const OperatorBound& b : operator_bound_audit(grid)) {
    r.passed = r.passed && b.trace_bound_ok && b.radius_bound_ok;
    if (b.t >= 0.0) {
      d << fmt("t=%g: tr %.3g rho %.3g <= %.3g; ", b.t, b.trace, b.spectral_radius,
               b.bound + tol::kBoundSlack);
    } else {
      d << fmt("t=%g: rho %.6f < 1; ", b.t, b.spectral_radius);
    }
  }
  r.detail = d.str();
}

void ginibre_law(const Context& c, CriterionResult& r) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> grid = make_grid(-4.0, 3.0, 0.05);
  const GinibreEnsemble e = run_ginibre_ensemble(128, c.n.ginibre_samples, c.seed(9), c.workers);
  const double elapsed = seconds_since(start);
  const auto emp = empirical_cdf_points(e.lambda_max, grid, Method::ginibre_empirical);
  const double ks = sup_distance(emp, cdf_curve(grid, kDefaultNodes, c.workers));
  r.passed = ks <= tol::kGinibreKs && e.parity_violations == 0 && elapsed < tol::kGinibreSeconds;
  r.detail = fmt("n=128, %llu samples: KS %.4f (limit %g), parity violations %llu, %.1f s",
                 static_cast<unsigned long long>(c.n.ginibre_samples), ks, tol::kGinibreKs,
                 static_cast<unsigned long long>(e.parity_violations), elapsed);
}

void abm_law(const Context& c, CriterionResult& r) {
  AbmConfig cfg;
  cfg.intensity = 16.0;
  cfg.s = 1.0;
  cfg.dt = 1e-3;
  cfg.n_runs = c.n.abm_runs;
  cfg.seed = c.seed(10);
  cfg.workers = c.workers;
  const RightmostLaw law = rightmost_law(cfg, {});
  const std::vector<double> grid = make_grid(-3.0, 2.0, 0.05);
  const double ks = sup_distance(law.rescaled(grid), cdf_curve(grid, kDefaultNodes, c.workers));
  r.passed = ks <= tol::kAbmKs && law.odd_decrements == 0;
  r.detail = fmt("s=1, %llu runs: KS %.4f (limit %g), odd decrements %llu, boundary runs %llu",
                 static_cast<unsigned long long>(cfg.n_runs), ks, tol::kAbmKs,
                 static_cast<unsigned long long>(law.odd_decrements),
                 static_cast<unsigned long long>(law.boundary_contaminated));
}

void self_consistency(const Context& c, CriterionResult& r) {
  double refinement = 0.0;
  for (double t : make_grid(-8.0, 4.0, 0.5)) {
    refinement =
        std::max(refinement, std::abs(cdf_at(t, 128).probability - cdf_at(t, 64).probability));
  }

  const ProbIdentity id = prob_identity_check(-2.0, c.n.identity_paths, c.walk(11, c.workers));
  const double identity_gap = std::abs(id.via_positive_part - id.via_max);

  const WalkConfig one = c.walk(11, 1);
  WalkConfig two = one;
  two.workers = 2;
  const EdgeCdfPoint a = cdf_mc(-2.0, c.n.identity_paths, one);
  const EdgeCdfPoint b = cdf_mc(-2.0, c.n.identity_paths, one);
  const EdgeCdfPoint w = cdf_mc(-2.0, c.n.identity_paths, two);
  const bool repeat = a.probability == b.probability && a.error_estimate == b.error_estimate;
  const bool across = a.probability == w.probability && a.error_estimate == w.error_estimate;

  r.passed = refinement < tol::kRefinement && id.max_pathwise_residual <= tol::kIdentity &&
             identity_gap <= tol::kIdentity && repeat && across;
  r.detail = fmt("64->128 nodes %.2g; identity pathwise %.2g, means %.2g; repeat %s, 1 vs 2 "
                 "workers %s",
                 refinement, id.max_pathwise_residual, identity_gap, repeat ? "equal" : "DIFFER",
                 across ? "equal" : "DIFFER");
}

struct Criterion {
  int id;
  const char* name;
  void (*run)(const Context&, CriterionResult&);
};

constexpr std::array<Criterion, 11> kCriteria{{
    {1, "key constant", key_constant_check},
    {2, "right tail", right_tail},
    {3, "left-tail rate", left_tail},
    {4, "route equivalence", route_equivalence},
    {5, "cyclic lemma", cyclic_lemma},
    {6, "exit-probability sandwich", exit_sandwich},
    {7, "Lotov limit", lotov},
    {8, "operator bounds", operator_bounds},
    {9, "Ginibre empirical law", ginibre_law},
    {10, "ABM rescaling", abm_law},
    {11, "self-consistency", self_consistency},
}};

}  // namespace

std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options, const std::function<void(const CriterionResult&)>& on_result) {
  const Context ctx{options, options.tier == Tier::full ? kFull : kQuick,
                    resolve_workers(options.workers)};
  std::vector<CriterionResult> results;
  for (const Criterion& c : kCriteria) {
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(ctx, r);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = seconds_since(start);
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  return fmt("[%2d] %-4s %-26s %7.1fs  %s", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(),
             r.seconds, r.detail.c_str());
}

}  // namespace gedge
