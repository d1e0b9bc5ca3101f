#pragma once

// Error statistics and density grids for paired test/reference series.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace airsea {

// Two aligned series: values under test and reference values at the same
// points. Operations require equal non-zero lengths and finite entries.
struct PairedSeries {
  std::vector<double> test;
  std::vector<double> ref;
};

// Mean of (test - ref).
double bias(const PairedSeries& p);

// Root mean square of (test - ref).
double rmse(const PairedSeries& p);

// Population standard deviation of (test - ref) about its mean, so that
// rmse^2 == bias^2 + std_dev^2 holds identically.
double std_dev(const PairedSeries& p);

// 2-D histogram of (x = ref, y = test) pairs over fixed bin edges.
struct DensityGrid {
  std::vector<double> x_edges;
  std::vector<double> y_edges;
  std::vector<std::int64_t> counts;  // row-major, ny * nx
  std::int64_t out_of_range = 0;     // pairs falling outside the grid

  std::size_t nx() const { return x_edges.size() - 1; }
  std::size_t ny() const { return y_edges.size() - 1; }
  std::int64_t at(std::size_t iy, std::size_t ix) const {
    return counts[iy * nx() + ix];
  }
};

// Count pairs into bins. Bins are half-open [e_i, e_{i+1}) except the last,
// which also includes its upper edge. Edges must be strictly increasing with
// at least two entries per axis; anything else throws std::domain_error.
DensityGrid density_grid(const PairedSeries& p, std::vector<double> x_edges,
                         std::vector<double> y_edges);

// n_bins + 1 equally spaced edges over [lo, hi].
std::vector<double> linear_edges(double lo, double hi, std::size_t n_bins);

}  // namespace airsea
