#include "gedge/cdf_point.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gedge {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::fredholm:
      return "fredholm";
    case Method::monte_carlo:
      return "monte_carlo";
    case Method::ginibre_empirical:
      return "ginibre_empirical";
    case Method::abm_empirical:
      return "abm_empirical";
  }
  return "unknown";
}

std::vector<EdgeCdfPoint> empirical_cdf_points(std::span<const double> samples,
                                               std::span<const double> t_grid, Method method) {
  if (t_grid.empty()) throw std::invalid_argument("empirical_cdf_points: empty grid");
  if (samples.empty()) throw std::invalid_argument("empirical_cdf_points: no samples");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  std::vector<EdgeCdfPoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    const double p = static_cast<double>(below) / n;
    out.push_back({t, p, method, std::sqrt(p * (1.0 - p) / n)});
  }
  return out;
}

double sup_distance(std::span<const EdgeCdfPoint> a, std::span<const EdgeCdfPoint> b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_distance: grids differ in length");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].t - b[i].t) > 1e-12) {
      throw std::invalid_argument("sup_distance: grids differ at index " + std::to_string(i));
    }
    d = std::max(d, std::abs(a[i].probability - b[i].probability));
  }
  return d;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw std::invalid_argument("make_grid: need finite lo <= hi and step > 0");
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

}  // namespace gedge
