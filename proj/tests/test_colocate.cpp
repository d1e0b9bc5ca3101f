#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "airsea/colocate.hpp"
#include "airsea/flux.hpp"
#include "colocate_oracle.hpp"

using namespace airsea;
using colocate_oracle::brute_matchups;
using colocate_oracle::buoy_key;
using colocate_oracle::geo_key;
using colocate_oracle::random_streams;
using colocate_oracle::Streams;

namespace {

bool same_d(double a, double b) {
  return a == b || (std::isnan(a) && std::isnan(b));
}

bool same_row(const MatchupRecord& a, const MatchupRecord& b) {
  return a.time == b.time && a.buoy_id == b.buoy_id && same_d(a.lat, b.lat) &&
         same_d(a.lon, b.lon) && same_d(a.sar_wind_10m, b.sar_wind_10m) &&
         same_d(a.buoy_wind_10m, b.buoy_wind_10m) &&
         same_d(a.precip_mmhr, b.precip_mmhr) && same_d(a.q10_kgkg, b.q10_kgkg) &&
         a.stability == b.stability && same_d(a.wind_ms, b.wind_ms) &&
         same_d(a.anemometer_height_m, b.anemometer_height_m) &&
         same_d(a.tair_c, b.tair_c) && same_d(a.tsea_c, b.tsea_c) &&
         same_d(a.pres_hpa, b.pres_hpa) && same_d(a.hs_m, b.hs_m) &&
         same_d(a.tp_s, b.tp_s);
}

void check_equal(const MatchupResult& got, const MatchupResult& want) {
  CHECK(got.counters.sar_rows == want.counters.sar_rows);
  CHECK(got.counters.buoy_rows == want.counters.buoy_rows);
  CHECK(got.counters.precip_rows == want.counters.precip_rows);
  CHECK(got.counters.humidity_rows == want.counters.humidity_rows);
  CHECK(got.counters.sar_without_buoy == want.counters.sar_without_buoy);
  CHECK(got.counters.dropped_dedup == want.counters.dropped_dedup);
  CHECK(got.counters.dropped_no_precip == want.counters.dropped_no_precip);
  CHECK(got.counters.dropped_no_humidity == want.counters.dropped_no_humidity);
  CHECK(got.counters.emitted == want.counters.emitted);
  REQUIRE(got.rows.size() == want.rows.size());
  REQUIRE(got.provenance.size() == got.rows.size());
  for (std::size_t i = 0; i < got.rows.size(); ++i) {
    CHECK(same_row(got.rows[i], want.rows[i]));
    CHECK(geo_key(got.provenance[i].sar) == geo_key(want.provenance[i].sar));
    CHECK(buoy_key(got.provenance[i].buoy) == buoy_key(want.provenance[i].buoy));
    CHECK(geo_key(got.provenance[i].precip) == geo_key(want.provenance[i].precip));
    CHECK(geo_key(got.provenance[i].humidity) ==
          geo_key(want.provenance[i].humidity));
  }
}

}  // namespace

TEST_CASE("great-circle distance matches frozen references") {
  CHECK(haversine_km(0.0, 0.0, 0.0, 1.0) ==
        doctest::Approx(111.19492664455873735).epsilon(1e-12));
  CHECK(haversine_km(40.0, -70.0, 40.0, -70.0) == 0.0);
  CHECK(haversine_km(40.0, -70.0, 41.0, -69.0) ==
        doctest::Approx(haversine_km(41.0, -69.0, 40.0, -70.0)).epsilon(1e-15));
  // one degree of longitude shrinks with latitude
  CHECK(haversine_km(60.0, 0.0, 60.0, 1.0) < haversine_km(0.0, 0.0, 0.0, 1.0));

  CHECK_THROWS_AS(haversine_km(91.0, 0.0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(haversine_km(0.0, 180.0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(haversine_km(0.0, -181.0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(haversine_km(std::nan(""), 0.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("nearest-record matching honors the window and its tie rules") {
  GeoTimeRecord anchor;
  anchor.time = 10000;
  anchor.lat = 40.0;
  anchor.lon = -70.0;
  const MatchWindow w{300.0, 25.0};

  CHECK(!match_nearest(anchor, {}, w).has_value());

  const auto rec = [](std::int64_t t, double lat, double lon, double v) {
    GeoTimeRecord r;
    r.time = t;
    r.lat = lat;
    r.lon = lon;
    r.value = v;
    return r;
  };

  SUBCASE("the time window is inclusive at both ends") {
    const auto hit = match_nearest(anchor, {rec(9700, 40.0, -70.0, 1.0)}, w);
    REQUIRE(hit.has_value());
    CHECK(hit->value == 1.0);
    CHECK(match_nearest(anchor, {rec(10300, 40.0, -70.0, 2.0)}, w).has_value());
    CHECK(!match_nearest(anchor, {rec(9699, 40.0, -70.0, 3.0)}, w).has_value());
    CHECK(!match_nearest(anchor, {rec(10301, 40.0, -70.0, 4.0)}, w).has_value());
  }

  SUBCASE("records beyond the distance limit never match") {
    CHECK(!match_nearest(anchor, {rec(10000, 41.0, -70.0, 1.0)}, w).has_value());
    const auto hit = match_nearest(
        anchor, {rec(10010, 41.0, -70.0, 1.0), rec(10200, 40.1, -70.0, 2.0)}, w);
    REQUIRE(hit.has_value());
    CHECK(hit->value == 2.0);
  }

  SUBCASE("closeness in time outranks closeness in space") {
    const auto hit = match_nearest(
        anchor, {rec(9950, 40.0, -70.0, 1.0), rec(10010, 40.1, -70.0, 2.0)}, w);
    REQUIRE(hit.has_value());
    CHECK(hit->value == 2.0);
  }

  SUBCASE("equal time offsets fall to the smaller distance") {
    const auto hit = match_nearest(
        anchor, {rec(9900, 40.1, -70.0, 1.0), rec(10100, 40.05, -70.0, 2.0)}, w);
    REQUIRE(hit.has_value());
    CHECK(hit->value == 2.0);
  }

  SUBCASE("a full tie keeps the earlier record") {
    const auto hit = match_nearest(
        anchor, {rec(9900, 40.05, -70.0, 1.0), rec(10100, 40.05, -70.0, 2.0)}, w);
    REQUIRE(hit.has_value());
    CHECK(hit->value == 1.0);
  }

  SUBCASE("unsorted candidates are rejected") {
    CHECK_THROWS_AS(match_nearest(
                        anchor,
                        {rec(10100, 40.0, -70.0, 1.0), rec(9900, 40.0, -70.0, 2.0)},
                        w),
                    std::invalid_argument);
  }

  SUBCASE("anchors carry valid coordinates") {
    GeoTimeRecord bad = anchor;
    bad.lat = 95.0;
    CHECK_THROWS_AS(match_nearest(bad, {}, w), std::domain_error);
  }
}

TEST_CASE("empty and one-sided inputs produce clean counters") {
  const MatchupResult none = build_matchups({}, {}, {}, {});
  CHECK(none.rows.empty());
  CHECK(none.counters.sar_rows == 0);
  CHECK(none.counters.emitted == 0);

  GeoTimeRecord s;
  s.time = 1000;
  s.lat = 40.0;
  s.lon = -70.0;
  s.value = 9.0;
  const MatchupResult sar_only = build_matchups({s, s, s}, {}, {}, {});
  CHECK(sar_only.counters.sar_rows == 3);
  CHECK(sar_only.counters.sar_without_buoy == 3);
  CHECK(sar_only.rows.empty());
}

TEST_CASE("competing claims on one buoy settle by distance before time") {
  BuoyRecord b;
  b.time = 1000;
  b.buoy_id = "44000";
  b.lat = 40.0;
  b.lon = -70.0;
  b.wind_ms = 7.0;
  b.anemometer_height_m = 5.0;
  b.tair_c = 15.0;
  b.tsea_c = 16.0;
  b.pres_hpa = 1013.0;

  GeoTimeRecord near_far;  // nearer in space, farther in time
  near_far.time = 1060;
  near_far.lat = 40.0015;
  near_far.lon = -70.0;
  near_far.value = 11.0;
  GeoTimeRecord far_near;  // farther in space, nearer in time
  far_near.time = 1010;
  far_near.lat = 40.002;
  far_near.lon = -70.0;
  far_near.value = 12.0;

  GeoTimeRecord p;
  p.time = 1000;
  p.lat = 40.0;
  p.lon = -70.0;
  p.value = 1.5;
  GeoTimeRecord h = p;
  h.value = 0.009;

  const MatchupResult r = build_matchups({near_far, far_near}, {b}, {p}, {h});
  CHECK(r.counters.dropped_dedup == 1);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].sar_wind_10m == 11.0);
  CHECK(r.rows[0].precip_mmhr == 1.5);
  CHECK(r.rows[0].q10_kgkg == 0.009);
  CHECK(r.rows[0].stability == 0);  // sea warmer than air
}

TEST_CASE("the engine agrees with a quadratic reference on random streams") {
  for (std::uint64_t seed : {101u, 202u, 303u}) {
    const Streams s = random_streams(seed, 200, 80, 60, 60);
    const MatchupWindows w;
    const MatchupResult got = build_matchups(s.sar, s.buoy, s.precip, s.humidity, w);
    const MatchupResult want =
        brute_matchups(s.sar, s.buoy, s.precip, s.humidity, w);
    check_equal(got, want);
    CHECK(got.counters.emitted > 0);  // the geometry actually produces matches
    CHECK(got.counters.sar_without_buoy > 0);
    CHECK(got.counters.dropped_dedup > 0);
  }
}

TEST_CASE("every SAR record is accounted for exactly once") {
  const Streams s = random_streams(404, 250, 60, 50, 50);
  const MatchupCounters c =
      build_matchups(s.sar, s.buoy, s.precip, s.humidity, {}).counters;
  CHECK(c.sar_rows == c.sar_without_buoy + c.dropped_dedup + c.dropped_no_precip +
                          c.dropped_no_humidity + c.emitted);
}

TEST_CASE("output does not depend on input permutation") {
  const Streams s = random_streams(505, 150, 50, 40, 40);
  const MatchupResult a = build_matchups(s.sar, s.buoy, s.precip, s.humidity, {});

  Streams shuffled = s;
  std::mt19937_64 gen(999);
  std::shuffle(shuffled.sar.begin(), shuffled.sar.end(), gen);
  std::shuffle(shuffled.buoy.begin(), shuffled.buoy.end(), gen);
  std::shuffle(shuffled.precip.begin(), shuffled.precip.end(), gen);
  std::shuffle(shuffled.humidity.begin(), shuffled.humidity.end(), gen);
  const MatchupResult b =
      build_matchups(shuffled.sar, shuffled.buoy, shuffled.precip, shuffled.humidity, {});
  check_equal(a, b);
}

TEST_CASE("provenance sits inside the windows and explains every field") {
  const Streams s = random_streams(606, 200, 80, 60, 60);
  const MatchupWindows w;
  const MatchupResult r = build_matchups(s.sar, s.buoy, s.precip, s.humidity, w);
  REQUIRE(r.rows.size() == r.provenance.size());
  REQUIRE(!r.rows.empty());

  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const MatchupRecord& row = r.rows[i];
    const MatchupProvenance& p = r.provenance[i];

    CHECK(std::abs(static_cast<double>(p.sar.time - p.buoy.time)) <=
          w.sar_buoy.max_dt_s);
    CHECK(haversine_km(p.sar.lat, p.sar.lon, p.buoy.lat, p.buoy.lon) <=
          w.sar_buoy.max_dist_km);
    CHECK(std::abs(static_cast<double>(p.precip.time - p.buoy.time)) <=
          w.precip.max_dt_s);
    CHECK(haversine_km(p.precip.lat, p.precip.lon, p.buoy.lat, p.buoy.lon) <=
          w.precip.max_dist_km);
    CHECK(std::abs(static_cast<double>(p.humidity.time - p.buoy.time)) <=
          w.humidity.max_dt_s);
    CHECK(haversine_km(p.humidity.lat, p.humidity.lon, p.buoy.lat, p.buoy.lon) <=
          w.humidity.max_dist_km);

    CHECK(row.time == p.buoy.time);
    CHECK(row.buoy_id == p.buoy.buoy_id);
    CHECK(row.sar_wind_10m == p.sar.value);
    CHECK(row.buoy_wind_10m ==
          wind_to_10m_buoy(p.buoy.wind_ms, p.buoy.anemometer_height_m));
    CHECK(row.precip_mmhr == p.precip.value);
    CHECK(row.q10_kgkg == p.humidity.value);
    CHECK(row.stability ==
          static_cast<int>(classify_stability(p.buoy.tsea_c, p.buoy.tair_c)));
  }

  // emitted rows leave in time order
  for (std::size_t i = 1; i < r.rows.size(); ++i)
    CHECK(r.rows[i - 1].time <= r.rows[i].time);
}

TEST_CASE("bad coordinates in any stream are rejected") {
  GeoTimeRecord bad;
  bad.time = 0;
  bad.lat = 90.5;
  bad.lon = 0.0;
  CHECK_THROWS_AS(build_matchups({bad}, {}, {}, {}), std::domain_error);
  BuoyRecord bb;
  bb.lat = 0.0;
  bb.lon = 180.0;
  CHECK_THROWS_AS(build_matchups({}, {bb}, {}, {}), std::domain_error);
}
