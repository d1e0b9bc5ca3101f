#include "airsea/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace airsea {

namespace {

void check_series(const PairedSeries& p) {
  if (p.test.empty())
    throw std::domain_error("PairedSeries: series must be non-empty");
  if (p.test.size() != p.ref.size())
    throw std::domain_error("PairedSeries: test and ref lengths differ");
  for (std::size_t i = 0; i < p.test.size(); ++i)
    if (!std::isfinite(p.test[i]) || !std::isfinite(p.ref[i]))
      throw std::domain_error("PairedSeries: entries must be finite");
}

}  // namespace

double bias(const PairedSeries& p) {
  check_series(p);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.test.size(); ++i) sum += p.test[i] - p.ref[i];
  return sum / static_cast<double>(p.test.size());
}

double rmse(const PairedSeries& p) {
  check_series(p);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.test.size(); ++i) {
    const double d = p.test[i] - p.ref[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(p.test.size()));
}

double std_dev(const PairedSeries& p) {
  const double b = bias(p);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.test.size(); ++i) {
    const double d = p.test[i] - p.ref[i] - b;
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(p.test.size()));
}

namespace {

void check_edges(const std::vector<double>& edges, const char* axis) {
  if (edges.size() < 2)
    throw std::domain_error(std::string("density_grid: ") + axis +
                            " needs at least two edges");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (!(edges[i] < edges[i + 1]))
      throw std::domain_error(std::string("density_grid: ") + axis +
                              " edges must be strictly increasing");
  for (double e : edges)
    if (!std::isfinite(e))
      throw std::domain_error(std::string("density_grid: ") + axis +
                              " edges must be finite");
}

// Bin index under the half-open rule, or -1 when out of range. A value equal
// to the final edge belongs to the last bin.
std::ptrdiff_t bin_index(const std::vector<double>& edges, double v) {
  if (v < edges.front() || v > edges.back()) return -1;
  if (v == edges.back()) return static_cast<std::ptrdiff_t>(edges.size()) - 2;
  const auto it = std::upper_bound(edges.begin(), edges.end(), v);
  return (it - edges.begin()) - 1;
}

}  // namespace

DensityGrid density_grid(const PairedSeries& p, std::vector<double> x_edges,
                         std::vector<double> y_edges) {
  check_series(p);
  check_edges(x_edges, "x");
  check_edges(y_edges, "y");

  DensityGrid g;
  g.x_edges = std::move(x_edges);
  g.y_edges = std::move(y_edges);
  g.counts.assign(g.nx() * g.ny(), 0);

  for (std::size_t i = 0; i < p.test.size(); ++i) {
    const std::ptrdiff_t ix = bin_index(g.x_edges, p.ref[i]);
    const std::ptrdiff_t iy = bin_index(g.y_edges, p.test[i]);
    if (ix < 0 || iy < 0) {
      ++g.out_of_range;
      continue;
    }
    ++g.counts[static_cast<std::size_t>(iy) * g.nx() + static_cast<std::size_t>(ix)];
  }
  return g;
}

std::vector<double> linear_edges(double lo, double hi, std::size_t n_bins) {
  if (!(lo < hi) || n_bins == 0)
    throw std::domain_error("linear_edges: need lo < hi and n_bins > 0");
  std::vector<double> edges(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i)
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_bins);
  return edges;
}

}  // namespace airsea
