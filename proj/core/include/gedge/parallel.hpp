#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gedge {

/// Running mean and second central moment (Welford), mergeable (Chan et al.).
struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& o) noexcept {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(count + o.count);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.count) / n;
    m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / n;
    count += o.count;
  }

  double variance() const noexcept {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
  double std_error() const noexcept {
    return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

/// Joint moments of a pair, for delta-method error propagation.
struct CoMoments {
  Moments x;
  Moments y;
  double cxy = 0.0;  // sum of (x - mean_x)(y - mean_y)

  void add(double xv, double yv) noexcept {
    const double dx = xv - x.mean;
    x.add(xv);
    y.add(yv);
    cxy += dx * (yv - y.mean);
  }

  void merge(const CoMoments& o) noexcept {
    if (o.x.count == 0) return;
    if (x.count == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(x.count);
    const double nb = static_cast<double>(o.x.count);
    const double dx = o.x.mean - x.mean;
    const double dy = o.y.mean - y.mean;
    cxy += o.cxy + dx * dy * na * nb / (na + nb);
    x.merge(o.x);
    y.merge(o.y);
  }

  double covariance() const noexcept {
    return x.count > 1 ? cxy / static_cast<double>(x.count - 1) : 0.0;
  }
};

inline unsigned resolve_workers(unsigned requested) noexcept {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for every i in [0, count) on up to `workers` threads. The
/// first exception thrown (lowest index) is rethrown after all threads join.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  workers = std::min<unsigned>(resolve_workers(workers),
                               static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = count;

  auto body = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

/// Runs `n_items` independent items in fixed-size blocks and merges the
/// per-block accumulators in block order. Because each item seeds its own
/// engine, the result is bit-identical for any worker count.
template <class Acc, class ItemFn>
Acc run_blocked(std::uint64_t n_items, unsigned workers, ItemFn&& item) {
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t n_blocks = (n_items + kBlock - 1) / kBlock;
  std::vector<Acc> partial(n_blocks);
  parallel_for(n_blocks, workers, [&](std::size_t b) {
    const std::uint64_t begin = b * kBlock;
    const std::uint64_t end = std::min(n_items, begin + kBlock);
    Acc& acc = partial[b];
    for (std::uint64_t i = begin; i < end; ++i) item(i, acc);
  });
  Acc total{};
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace gedge
