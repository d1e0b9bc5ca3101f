#include "airsea/colocate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "airsea/flux.hpp"

namespace airsea {

namespace {

constexpr double kEarthRadiusKm = 6371.0;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

void check_coords(double lat, double lon, const char* who) {
  if (!std::isfinite(lat) || lat < -90.0 || lat > 90.0)
    throw std::domain_error(std::string(who) + ": latitude outside [-90, 90]");
  if (!std::isfinite(lon) || lon < -180.0 || lon >= 180.0)
    throw std::domain_error(std::string(who) + ": longitude outside [-180, 180)");
}

// Sort keys give every stream a total order so results cannot depend on the
// order records arrived in. Wave fields stay out: they may be NaN.
auto sort_key(const GeoTimeRecord& r) {
  return std::tie(r.time, r.lat, r.lon, r.value, r.source_id);
}

auto sort_key(const BuoyRecord& r) {
  return std::tie(r.time, r.buoy_id, r.lat, r.lon, r.wind_ms,
                  r.anemometer_height_m, r.tair_c, r.tsea_c, r.pres_hpa);
}

struct MatchHit {
  std::size_t index = 0;
  double dist_km = 0.0;
  double abs_dt_s = 0.0;
};

// Nearest-in-time candidate inside the window. Candidates must be sorted by
// time ascending. Ties fall to the smaller distance, then to the earlier
// candidate (which, scanning in sort order, is simply the incumbent).
template <typename Rec>
std::optional<MatchHit> find_nearest(std::int64_t t, double lat, double lon,
                                     const std::vector<Rec>& candidates,
                                     const MatchWindow& w) {
  const auto lo = std::lower_bound(
      candidates.begin(), candidates.end(), static_cast<double>(t) - w.max_dt_s,
      [](const Rec& r, double bound) { return static_cast<double>(r.time) < bound; });

  std::optional<MatchHit> best;
  for (auto it = lo; it != candidates.end(); ++it) {
    const double dt = std::abs(static_cast<double>(it->time - t));
    if (static_cast<double>(it->time - t) > w.max_dt_s) break;
    if (dt > w.max_dt_s) continue;
    const double dist = haversine_km(lat, lon, it->lat, it->lon);
    if (dist > w.max_dist_km) continue;
    if (!best || dt < best->abs_dt_s ||
        (dt == best->abs_dt_s && dist < best->dist_km)) {
      best = MatchHit{static_cast<std::size_t>(it - candidates.begin()), dist, dt};
    }
  }
  return best;
}

template <typename Rec>
void require_sorted_by_time(const std::vector<Rec>& v, const char* who) {
  const bool ok = std::is_sorted(
      v.begin(), v.end(),
      [](const Rec& a, const Rec& b) { return a.time < b.time; });
  if (!ok)
    throw std::invalid_argument(std::string(who) +
                                ": candidate stream is not sorted by time");
}

}  // namespace

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  check_coords(lat1, lon1, "haversine_km");
  check_coords(lat2, lon2, "haversine_km");
  const double phi1 = lat1 * kDegToRad;
  const double phi2 = lat2 * kDegToRad;
  const double dphi = (lat2 - lat1) * kDegToRad;
  const double dlam = (lon2 - lon1) * kDegToRad;
  const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                   std::cos(phi1) * std::cos(phi2) * std::sin(dlam / 2) * std::sin(dlam / 2);
  return 2.0 * kEarthRadiusKm * std::atan2(std::sqrt(a), std::sqrt(1.0 - a));
}

std::optional<GeoTimeRecord> match_nearest(
    const GeoTimeRecord& anchor, const std::vector<GeoTimeRecord>& candidates,
    const MatchWindow& w) {
  check_coords(anchor.lat, anchor.lon, "match_nearest");
  require_sorted_by_time(candidates, "match_nearest");
  const auto hit = find_nearest(anchor.time, anchor.lat, anchor.lon, candidates, w);
  if (!hit) return std::nullopt;
  return candidates[hit->index];
}

MatchupResult build_matchups(std::vector<GeoTimeRecord> sar,
                             std::vector<BuoyRecord> buoy,
                             std::vector<GeoTimeRecord> precip,
                             std::vector<GeoTimeRecord> humidity,
                             const MatchupWindows& w) {
  for (const auto& r : sar) check_coords(r.lat, r.lon, "build_matchups(sar)");
  for (const auto& r : buoy) check_coords(r.lat, r.lon, "build_matchups(buoy)");
  for (const auto& r : precip) check_coords(r.lat, r.lon, "build_matchups(precip)");
  for (const auto& r : humidity) check_coords(r.lat, r.lon, "build_matchups(humidity)");

  const auto by_key = [](const auto& a, const auto& b) {
    return sort_key(a) < sort_key(b);
  };
  std::sort(sar.begin(), sar.end(), by_key);
  std::sort(buoy.begin(), buoy.end(), by_key);
  std::sort(precip.begin(), precip.end(), by_key);
  std::sort(humidity.begin(), humidity.end(), by_key);

  MatchupResult out;
  out.counters.sar_rows = static_cast<std::int64_t>(sar.size());
  out.counters.buoy_rows = static_cast<std::int64_t>(buoy.size());
  out.counters.precip_rows = static_cast<std::int64_t>(precip.size());
  out.counters.humidity_rows = static_cast<std::int64_t>(humidity.size());

  // Stage 1: every SAR record claims its nearest buoy record. One buoy
  // record can back only one matchup, so ties are settled by distance, then
  // by time offset, then by SAR sort order (the incumbent wins ties).
  struct Claim {
    std::size_t sar_index;
    MatchHit hit;
  };
  std::map<std::size_t, Claim> winner_by_buoy;
  for (std::size_t i = 0; i < sar.size(); ++i) {
    const auto hit = find_nearest(sar[i].time, sar[i].lat, sar[i].lon, buoy, w.sar_buoy);
    if (!hit) {
      ++out.counters.sar_without_buoy;
      continue;
    }
    auto [it, inserted] = winner_by_buoy.try_emplace(hit->index, Claim{i, *hit});
    if (!inserted) {
      Claim& cur = it->second;
      const bool better =
          hit->dist_km < cur.hit.dist_km ||
          (hit->dist_km == cur.hit.dist_km && hit->abs_dt_s < cur.hit.abs_dt_s);
      if (better) {
        cur = Claim{i, *hit};
      }
      ++out.counters.dropped_dedup;
    }
  }

  // Stage 2: attach precipitation, then humidity, anchored at the buoy
  // record. A pair missing either attachment is dropped whole.
  for (const auto& [buoy_index, claim] : winner_by_buoy) {
    const BuoyRecord& b = buoy[buoy_index];
    const auto p_hit = find_nearest(b.time, b.lat, b.lon, precip, w.precip);
    if (!p_hit) {
      ++out.counters.dropped_no_precip;
      continue;
    }
    const auto h_hit = find_nearest(b.time, b.lat, b.lon, humidity, w.humidity);
    if (!h_hit) {
      ++out.counters.dropped_no_humidity;
      continue;
    }

    const GeoTimeRecord& s = sar[claim.sar_index];
    const GeoTimeRecord& pr = precip[p_hit->index];
    const GeoTimeRecord& hu = humidity[h_hit->index];

    MatchupRecord row;
    row.time = b.time;
    row.buoy_id = b.buoy_id;
    row.lat = b.lat;
    row.lon = b.lon;
    row.sar_wind_10m = s.value;
    row.buoy_wind_10m = wind_to_10m_buoy(b.wind_ms, b.anemometer_height_m);
    row.precip_mmhr = pr.value;
    row.q10_kgkg = hu.value;
    row.stability = static_cast<int>(classify_stability(b.tsea_c, b.tair_c));
    row.wind_ms = b.wind_ms;
    row.anemometer_height_m = b.anemometer_height_m;
    row.tair_c = b.tair_c;
    row.tsea_c = b.tsea_c;
    row.pres_hpa = b.pres_hpa;
    row.hs_m = b.hs_m;
    row.tp_s = b.tp_s;

    out.rows.push_back(std::move(row));
    out.provenance.push_back(MatchupProvenance{s, b, pr, hu});
  }
  out.counters.emitted = static_cast<std::int64_t>(out.rows.size());

  // Emit sorted by time, then buoy id; deeper keys only break exact
  // duplicates deterministically.
  std::vector<std::size_t> order(out.rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto row_key = [&](std::size_t i) {
    return std::tuple_cat(std::tie(out.rows[i].time, out.rows[i].buoy_id),
                          sort_key(out.provenance[i].buoy),
                          sort_key(out.provenance[i].sar));
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return row_key(a) < row_key(b);
  });
  MatchupResult sorted;
  sorted.counters = out.counters;
  sorted.rows.reserve(out.rows.size());
  sorted.provenance.reserve(out.rows.size());
  for (std::size_t i : order) {
    sorted.rows.push_back(std::move(out.rows[i]));
    sorted.provenance.push_back(std::move(out.provenance[i]));
  }
  return sorted;
}

}  // namespace airsea
