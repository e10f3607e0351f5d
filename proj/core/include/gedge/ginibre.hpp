#pragma once

// Direct sampling of real Ginibre matrices (iid N(0,1) entries) and the
// empirical law of the largest real eigenvalue shifted by sqrt(n).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gedge/cdf_point.hpp"
#include "gedge/parallel.hpp"

namespace gedge {

inline constexpr int kMaxGinibreDim = 1024;
inline constexpr std::uint64_t kMaxGinibreSamples = 100'000;

struct GinibreSample {
  int n = 0;
  /// Eigenvalues sitting in 1x1 blocks of the real Schur form, ascending.
  std::vector<double> real_eigenvalues;
  /// max(real_eigenvalues) - sqrt(n); empty when there is no real eigenvalue.
  std::optional<double> lambda_max_shifted;
  /// Fresh matrices drawn because the QR iteration did not converge.
  int retries = 0;
};

/// One n x n matrix, 1 <= n <= 1024. Deterministic in (n, seed).
GinibreSample sample_ginibre(int n, std::uint64_t seed);

struct GinibreEnsemble {
  int n = 0;
  /// Shifted lambda_max per sample in sample order; -inf when a sample has
  /// no real eigenvalue.
  std::vector<double> lambda_max;
  Moments real_count;
  std::uint64_t parity_violations = 0;
  std::uint64_t retries = 0;
};

/// Sample i uses seed derive_seed(seed, i); the result does not depend on
/// the worker count.
GinibreEnsemble run_ginibre_ensemble(int n, std::uint64_t n_samples, std::uint64_t seed,
                                     unsigned workers = 1);

/// Empirical P(lambda_max - sqrt(n) < t) on `t_grid` from 10^3 to 10^5 samples.
std::vector<EdgeCdfPoint> empirical_cdf(int n, std::uint64_t n_samples,
                                        std::span<const double> t_grid, std::uint64_t seed,
                                        unsigned workers = 1);

}  // namespace gedge
