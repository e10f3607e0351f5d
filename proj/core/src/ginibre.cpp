#include "gedge/ginibre.hpp"

#include <Eigen/Eigenvalues>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gedge/error.hpp"
#include "gedge/rng.hpp"

namespace gedge {
namespace {

constexpr int kMaxRetries = 8;

struct Workspace {
  Eigen::MatrixXd a;
  Eigen::RealSchur<Eigen::MatrixXd> schur;

  explicit Workspace(int n) : a(n, n), schur(n) {}
  int size() const noexcept { return static_cast<int>(a.rows()); }
};

/// Fills ws.a with a fresh matrix and reduces it to real Schur form.
bool reduce(std::uint64_t seed, Workspace& ws) {
  Xoshiro256 eng(seed);
  boost::random::normal_distribution<double> normal;
  for (Eigen::Index j = 0; j < ws.a.cols(); ++j) {
    for (Eigen::Index i = 0; i < ws.a.rows(); ++i) ws.a(i, j) = normal(eng);
  }
  ws.schur.compute(ws.a, false);
  return ws.schur.info() == Eigen::Success;
}

GinibreSample sample_with(int n, std::uint64_t seed, Workspace& ws) {
  GinibreSample out;
  out.n = n;
  while (!reduce(derive_seed(seed, static_cast<std::uint64_t>(out.retries)), ws)) {
    if (++out.retries > kMaxRetries) {
      throw NumericalError("ginibre", "Schur iteration failed to converge on " +
                                          std::to_string(out.retries) + " matrices of size " +
                                          std::to_string(n));
    }
  }

  // A zero subdiagonal entry ends a 1x1 block; a nonzero one opens a 2x2 block.
  const Eigen::MatrixXd& t = ws.schur.matrixT();
  for (int i = 0; i < n;) {
    if (i + 1 == n || t(i + 1, i) == 0.0) {
      out.real_eigenvalues.push_back(t(i, i));
      ++i;
    } else {
      i += 2;
    }
  }
  std::sort(out.real_eigenvalues.begin(), out.real_eigenvalues.end());
  if (!out.real_eigenvalues.empty()) {
    out.lambda_max_shifted = out.real_eigenvalues.back() - std::sqrt(static_cast<double>(n));
  }
  return out;
}

void require_dim(int n) {
  if (n < 1 || n > kMaxGinibreDim) {
    throw std::invalid_argument("ginibre: matrix size must be in [1, 1024], got " +
                                std::to_string(n));
  }
}

}  // namespace

GinibreSample sample_ginibre(int n, std::uint64_t seed) {
  require_dim(n);
  Workspace ws(n);
  return sample_with(n, seed, ws);
}

GinibreEnsemble run_ginibre_ensemble(int n, std::uint64_t n_samples, std::uint64_t seed,
                                     unsigned workers) {
  require_dim(n);
  if (n_samples == 0 || n_samples > kMaxGinibreSamples) {
    throw std::invalid_argument("ginibre: sample count must be in [1, 10^5], got " +
                                std::to_string(n_samples));
  }

  struct Acc {
    Moments real_count;
    std::uint64_t parity_violations = 0;
    std::uint64_t retries = 0;
    void merge(const Acc& o) {
      real_count.merge(o.real_count);
      parity_violations += o.parity_violations;
      retries += o.retries;
    }
  };

  GinibreEnsemble out;
  out.n = n;
  out.lambda_max.resize(n_samples);

  std::vector<Acc> per_sample(n_samples);
  parallel_for(n_samples, workers, [&](std::size_t i) {
    thread_local Workspace ws(0);
    if (ws.size() != n) ws = Workspace(n);
    const GinibreSample s = sample_with(n, derive_seed(seed, i), ws);
    const std::size_t count = s.real_eigenvalues.size();
    Acc& a = per_sample[i];
    a.real_count.add(static_cast<double>(count));
    a.parity_violations = (count % 2) != (static_cast<std::size_t>(n) % 2);
    a.retries = static_cast<std::uint64_t>(s.retries);
    out.lambda_max[i] = s.lambda_max_shifted.value_or(-std::numeric_limits<double>::infinity());
  });

  Acc total;
  for (const Acc& a : per_sample) total.merge(a);
  out.real_count = total.real_count;
  out.parity_violations = total.parity_violations;
  out.retries = total.retries;
  return out;
}

std::vector<EdgeCdfPoint> empirical_cdf(int n, std::uint64_t n_samples,
                                        std::span<const double> t_grid, std::uint64_t seed,
                                        unsigned workers) {
  if (t_grid.empty()) throw std::invalid_argument("ginibre empirical_cdf: empty grid");
  if (n_samples < 1000) {
    throw std::invalid_argument("ginibre empirical_cdf: need at least 1000 samples, got " +
                                std::to_string(n_samples));
  }
  const GinibreEnsemble e = run_ginibre_ensemble(n, n_samples, seed, workers);
  return empirical_cdf_points(e.lambda_max, t_grid, Method::ginibre_empirical);
}

}  // namespace gedge
