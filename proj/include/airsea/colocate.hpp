#pragma once

// Spatiotemporal collocation of SAR scenes, buoy observations, precipitation
// and humidity analyses into complete matchup records.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace airsea {

// Minimal geolocated, timestamped scalar observation.
struct GeoTimeRecord {
  std::int64_t time = 0;  // UTC seconds since the Unix epoch
  double lat = 0.0;       // [-90, 90]
  double lon = 0.0;       // [-180, 180)
  double value = 0.0;
  std::string source_id;
};

// One buoy observation row as read from the buoy stream.
struct BuoyRecord {
  std::int64_t time = 0;
  std::string buoy_id;
  double lat = 0.0;
  double lon = 0.0;
  double wind_ms = 0.0;
  double anemometer_height_m = 0.0;
  double tair_c = 0.0;
  double tsea_c = 0.0;
  double pres_hpa = 0.0;
  double hs_m = std::numeric_limits<double>::quiet_NaN();
  double tp_s = std::numeric_limits<double>::quiet_NaN();
};

struct MatchWindow {
  double max_dt_s = 0.0;
  double max_dist_km = 0.0;
};

// Great-circle distance in km on a sphere of radius 6371.0 km. Coordinates
// outside [-90, 90] x [-180, 180) throw std::domain_error.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

// The candidate closest in time to the anchor among those inside the window,
// ties broken by smaller distance, then by earlier timestamp. Candidates
// must arrive sorted by time; an unsorted stream throws
// std::invalid_argument. Returns nothing when the window is empty.
std::optional<GeoTimeRecord> match_nearest(
    const GeoTimeRecord& anchor, const std::vector<GeoTimeRecord>& candidates,
    const MatchWindow& w);

// One complete collocation. time/lat/lon are those of the buoy record.
struct MatchupRecord {
  std::int64_t time = 0;
  std::string buoy_id;
  double lat = 0.0;
  double lon = 0.0;
  double sar_wind_10m = 0.0;
  double buoy_wind_10m = 0.0;  // anemometer wind adjusted to 10 m
  double precip_mmhr = 0.0;
  double q10_kgkg = 0.0;
  int stability = 0;  // 0 unstable, 1 neutral, 2 stable
  // buoy fields carried through for the flux stage
  double wind_ms = 0.0;
  double anemometer_height_m = 0.0;
  double tair_c = 0.0;
  double tsea_c = 0.0;
  double pres_hpa = 0.0;
  double hs_m = std::numeric_limits<double>::quiet_NaN();
  double tp_s = std::numeric_limits<double>::quiet_NaN();
};

struct MatchupWindows {
  MatchWindow sar_buoy{300.0, 0.25};
  MatchWindow precip{900.0, 4.0};
  MatchWindow humidity{1800.0, 25.0};
};

// Stage counters for run manifests and reconciliation checks.
struct MatchupCounters {
  std::int64_t sar_rows = 0;
  std::int64_t buoy_rows = 0;
  std::int64_t precip_rows = 0;
  std::int64_t humidity_rows = 0;
  std::int64_t sar_without_buoy = 0;    // no buoy inside the first window
  std::int64_t dropped_dedup = 0;       // lost the per-buoy nearest-distance contest
  std::int64_t dropped_no_precip = 0;
  std::int64_t dropped_no_humidity = 0;
  std::int64_t emitted = 0;
};

// The records each matchup was assembled from, for audit and verification.
struct MatchupProvenance {
  GeoTimeRecord sar;
  BuoyRecord buoy;
  GeoTimeRecord precip;
  GeoTimeRecord humidity;
};

struct MatchupResult {
  std::vector<MatchupRecord> rows;        // sorted by time, then buoy id
  std::vector<MatchupProvenance> provenance;  // parallel to rows
  MatchupCounters counters;
};

// Cascade collocation. Each SAR record is matched to its nearest buoy record
// inside the first window; when several SAR records claim the same buoy
// record, the nearest in distance wins. Precipitation and humidity are then
// attached using the buoy record's time and position as the anchor. Records
// missing any attachment are dropped. Inputs may arrive in any order; they
// are sorted internally, so the output does not depend on input permutation.
MatchupResult build_matchups(std::vector<GeoTimeRecord> sar,
                             std::vector<BuoyRecord> buoy,
                             std::vector<GeoTimeRecord> precip,
                             std::vector<GeoTimeRecord> humidity,
                             const MatchupWindows& w = {});

}  // namespace airsea
