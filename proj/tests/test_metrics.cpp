#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "airsea/metrics.hpp"

using namespace airsea;

TEST_CASE("bias, rmse and std on a frozen example") {
  const PairedSeries p{{1.0, 2.0, 4.0}, {1.0, 1.0, 1.0}};
  CHECK(bias(p) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(rmse(p) == doctest::Approx(1.8257418583505537115).epsilon(1e-14));
  CHECK(std_dev(p) == doctest::Approx(1.2472191289246471285).epsilon(1e-14));
}

TEST_CASE("error decomposition holds for seeded random series") {
  std::mt19937_64 gen(20240315);
  const auto u01 = [&gen] {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(u01() * 400);
    PairedSeries p;
    for (std::size_t i = 0; i < n; ++i) {
      p.ref.push_back(10.0 * u01() - 5.0);
      p.test.push_back(p.ref.back() + 3.0 * u01() - 1.0);
    }
    const double r = rmse(p);
    const double b = bias(p);
    const double s = std_dev(p);
    REQUIRE(r > 0.0);
    CHECK(std::abs(r * r - (b * b + s * s)) / (r * r) < 1e-12);
  }
}

TEST_CASE("identical series give zero everything") {
  const PairedSeries p{{2.5, 3.5, -1.0}, {2.5, 3.5, -1.0}};
  CHECK(bias(p) == 0.0);
  CHECK(rmse(p) == 0.0);
  CHECK(std_dev(p) == 0.0);
}

TEST_CASE("constant offset goes entirely into the bias") {
  PairedSeries p;
  for (int i = 0; i < 50; ++i) {
    p.ref.push_back(0.3 * i);
    p.test.push_back(0.3 * i + 0.5);
  }
  CHECK(bias(p) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(rmse(p) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(std_dev(p) == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("series validation") {
  CHECK_THROWS_AS(bias(PairedSeries{}), std::domain_error);
  CHECK_THROWS_AS(rmse(PairedSeries{{1.0}, {}}), std::domain_error);
  CHECK_THROWS_AS(
      std_dev(PairedSeries{{std::numeric_limits<double>::quiet_NaN()}, {1.0}}),
      std::domain_error);
  CHECK_THROWS_AS(
      bias(PairedSeries{{1.0}, {std::numeric_limits<double>::infinity()}}),
      std::domain_error);
}

TEST_CASE("density grid bins are half open with a closed last edge") {
  // x = ref, y = test
  PairedSeries p;
  p.ref = {0.0, 0.5, 1.0, 2.0, 1.999};
  p.test = {0.0, 1.5, 0.2, 2.0, 0.0};
  const DensityGrid g = density_grid(p, {0.0, 1.0, 2.0}, {0.0, 1.0, 2.0});
  CHECK(g.nx() == 2);
  CHECK(g.ny() == 2);
  CHECK(g.out_of_range == 0);
  CHECK(g.at(0, 0) == 1);  // (0, 0)
  CHECK(g.at(1, 0) == 1);  // (0.5, 1.5)
  CHECK(g.at(0, 1) == 2);  // (1.0, 0.2): inner edge rolls right; (1.999, 0)
  CHECK(g.at(1, 1) == 1);  // the (2.0, 2.0) corner lands in the closed last bin
  std::int64_t total = 0;
  for (const std::int64_t c : g.counts) total += c;
  CHECK(total == 5);
}

TEST_CASE("density grid counts out-of-range pairs without binning them") {
  PairedSeries p;
  p.ref = {-0.1, 0.5, 2.1, 0.5, 0.5};
  p.test = {0.5, -0.1, 0.5, 2.1, 0.5};
  const DensityGrid g = density_grid(p, {0.0, 1.0, 2.0}, {0.0, 1.0, 2.0});
  CHECK(g.out_of_range == 4);
  std::int64_t total = 0;
  for (const std::int64_t c : g.counts) total += c;
  CHECK(total == 1);
}

TEST_CASE("density grid edge validation") {
  const PairedSeries p{{1.0}, {1.0}};
  CHECK_THROWS_AS(density_grid(p, {0.0}, {0.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(density_grid(p, {0.0, 1.0}, {1.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(density_grid(p, {0.0, 0.0, 1.0}, {0.0, 1.0}), std::domain_error);
}

TEST_CASE("density grid total plus out-of-range equals the pair count") {
  std::mt19937_64 gen(7);
  const auto u01 = [&gen] {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  PairedSeries p;
  for (int i = 0; i < 1000; ++i) {
    p.ref.push_back(30.0 * u01() - 3.0);
    p.test.push_back(30.0 * u01() - 3.0);
  }
  const DensityGrid g = density_grid(p, linear_edges(0.0, 25.0, 40),
                                     linear_edges(0.0, 25.0, 40));
  const std::int64_t total =
      std::accumulate(g.counts.begin(), g.counts.end(), std::int64_t{0});
  CHECK(total + g.out_of_range == 1000);
  CHECK(g.nx() == 40);
  CHECK(g.ny() == 40);
}

TEST_CASE("linear edges are exact at both ends") {
  const std::vector<double> e = linear_edges(0.0, 25.0, 40);
  REQUIRE(e.size() == 41);
  CHECK(e.front() == 0.0);
  CHECK(e.back() == 25.0);
  for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i] > e[i - 1]);
  CHECK_THROWS_AS(linear_edges(1.0, 1.0, 4), std::domain_error);
  CHECK_THROWS_AS(linear_edges(0.0, 1.0, 0), std::domain_error);
}
