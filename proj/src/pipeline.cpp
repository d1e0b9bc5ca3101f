#include "airsea/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "airsea/csv.hpp"
#include "airsea/errors.hpp"
#include "airsea/metrics.hpp"

namespace airsea {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// AIRSEA_LOG=quiet|info|debug controls stderr chatter only; file outputs are
// identical at every level.
int log_level() {
  static const int level = [] {
    const char* env = std::getenv("AIRSEA_LOG");
    if (env == nullptr) return 1;
    const std::string v(env);
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "airsea: " << msg << "\n";
}

std::string seed_comment(std::uint64_t seed) {
  return std::string("airsea ") + kToolVersion + " seed=" + std::to_string(seed);
}

void ensure_parent_dir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

void write_json_file(const json& j, const std::string& path) {
  ensure_parent_dir(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "", "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, 0, "", e.what());
  }
}

// ---------------------------------------------------------------------------
// field checks shared by every reader

double checked_range(const CsvTable& t, std::size_t row, const std::string& col,
                     double lo, double hi) {
  const double v = t.as_double(row, col);
  if (!(v >= lo && v <= hi)) {
    throw ParseError(t.path(), t.line_number(row), col,
                     "value " + format_double(v) + " outside [" +
                         format_double(lo) + ", " + format_double(hi) + "]");
  }
  return v;
}

double checked_lat(const CsvTable& t, std::size_t row) {
  return checked_range(t, row, "lat", -90.0, 90.0);
}

double checked_lon(const CsvTable& t, std::size_t row) {
  const double v = t.as_double(row, "lon");
  if (!(v >= -180.0 && v < 180.0)) {
    throw ParseError(t.path(), t.line_number(row), "lon",
                     "value " + format_double(v) + " outside [-180, 180)");
  }
  return v;
}

double checked_anemometer(const CsvTable& t, std::size_t row) {
  const double v = t.as_double(row, "anemometer_height_m");
  if (!(v > 0.0016 && v <= 200.0)) {
    throw ParseError(t.path(), t.line_number(row), "anemometer_height_m",
                     "value " + format_double(v) + " outside (0.0016, 200]");
  }
  return v;
}

// Wave fields are optional: an empty cell or "nan" reads as NaN.
double checked_wave(const CsvTable& t, std::size_t row, const std::string& col) {
  if (t.cell(row, t.column(col)).empty()) return kNaN;
  const double v = t.as_double(row, col);
  if (std::isnan(v)) return v;
  if (!(v >= 0.0 && v <= 1000.0)) {
    throw ParseError(t.path(), t.line_number(row), col,
                     "value " + format_double(v) + " outside [0, 1000]");
  }
  return v;
}

int checked_stability(const CsvTable& t, std::size_t row) {
  const std::int64_t v = t.as_int(row, "stability");
  if (v < 0 || v > 2) {
    throw ParseError(t.path(), t.line_number(row), "stability",
                     "class must be 0, 1 or 2, got " + std::to_string(v));
  }
  return static_cast<int>(v);
}

std::string row_id(const std::string& path, std::size_t line) {
  return fs::path(path).filename().string() + ":" + std::to_string(line);
}

// ---------------------------------------------------------------------------
// input stream readers

std::vector<GeoTimeRecord> read_geo_stream(const std::string& path,
                                           const std::string& value_col,
                                           double lo, double hi) {
  const CsvTable t = CsvTable::read_file(path);
  for (const auto* col : {"time_iso8601", "lat", "lon"}) t.column(col);
  t.column(value_col);
  std::vector<GeoTimeRecord> out;
  out.reserve(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    GeoTimeRecord r;
    r.time = t.as_time(i, "time_iso8601");
    r.lat = checked_lat(t, i);
    r.lon = checked_lon(t, i);
    r.value = checked_range(t, i, value_col, lo, hi);
    r.source_id = row_id(path, t.line_number(i));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BuoyRecord> read_buoy_stream(const std::string& path) {
  const CsvTable t = CsvTable::read_file(path);
  std::vector<BuoyRecord> out;
  out.reserve(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    BuoyRecord r;
    r.time = t.as_time(i, "time_iso8601");
    r.buoy_id = t.cell(i, t.column("buoy_id"));
    if (r.buoy_id.empty()) {
      throw ParseError(path, t.line_number(i), "buoy_id", "must not be empty");
    }
    r.lat = checked_lat(t, i);
    r.lon = checked_lon(t, i);
    r.wind_ms = checked_range(t, i, "wind_ms", 0.0, 100.0);
    r.anemometer_height_m = checked_anemometer(t, i);
    r.tair_c = checked_range(t, i, "tair_c", -5.0, 45.0);
    r.tsea_c = checked_range(t, i, "tsea_c", -5.0, 45.0);
    r.pres_hpa = checked_range(t, i, "pres_hpa", 800.0, 1100.0);
    r.hs_m = checked_wave(t, i, "hs_m");
    r.tp_s = checked_wave(t, i, "tp_s");
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// option subsets usable without a full config

void validate_train_options(const TrainConfig& t) {
  if (t.epochs <= 0) throw std::invalid_argument("train: epochs must be positive");
  if (!(t.learning_rate > 0) || !std::isfinite(t.learning_rate)) {
    throw std::invalid_argument("train: learning_rate must be positive and finite");
  }
  if (!(t.train_fraction > 0.0 && t.train_fraction < 1.0)) {
    throw std::invalid_argument("train: train_fraction must lie in (0, 1)");
  }
  if (t.hidden != kMlpHidden) {
    throw std::invalid_argument("train: hidden layer width is fixed at " +
                                std::to_string(kMlpHidden));
  }
}

void validate_flux_options(const FluxOptions& f) {
  if (!(f.tol_ustar > 0) || !std::isfinite(f.tol_ustar)) {
    throw std::invalid_argument("flux: tol_ustar must be positive and finite");
  }
  if (f.max_iter <= 0) throw std::invalid_argument("flux: max_iter must be positive");
  if (!(f.wind_floor > 0) || !std::isfinite(f.wind_floor)) {
    throw std::invalid_argument("flux: wind_floor must be positive and finite");
  }
  if (!(f.zeta_min < 0.0 && f.zeta_max > 0.0)) {
    throw std::invalid_argument("flux: zeta clamp must straddle zero");
  }
  try {
    f.constants.validate();
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(e.what());
  }
}

void validate_windows(const MatchupWindows& w) {
  for (const auto* p : {&w.sar_buoy, &w.precip, &w.humidity}) {
    if (!(p->max_dt_s > 0) || !(p->max_dist_km > 0)) {
      throw std::invalid_argument("windows: max_dt_s and max_dist_km must be positive");
    }
  }
}

json counters_json(const MatchupCounters& c) {
  return json{{"sar_rows", c.sar_rows},
              {"buoy_rows", c.buoy_rows},
              {"precip_rows", c.precip_rows},
              {"humidity_rows", c.humidity_rows},
              {"sar_without_buoy", c.sar_without_buoy},
              {"dropped_dedup", c.dropped_dedup},
              {"dropped_no_precip", c.dropped_no_precip},
              {"dropped_no_humidity", c.dropped_no_humidity},
              {"emitted", c.emitted}};
}

}  // namespace

// ---------------------------------------------------------------------------
// config

void PipelineConfig::validate() const {
  if (sar_path.empty() || buoy_path.empty() || precip_path.empty() ||
      humidity_path.empty()) {
    throw std::invalid_argument("config: all four input paths must be set");
  }
  const std::string* paths[] = {&sar_path, &buoy_path, &precip_path, &humidity_path};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (*paths[i] == *paths[j]) {
        throw std::invalid_argument("config: input paths must be distinct, got '" +
                                    *paths[i] + "' twice");
      }
    }
  }
  if (out_dir.empty()) throw std::invalid_argument("config: out_dir must be set");
  validate_windows(windows);
  validate_train_options(train);
  validate_flux_options(flux);
}

namespace {

void expect_keys(const json& j, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw std::invalid_argument("config: " + where + " must be an object");
  }
  for (const auto& item : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        })) {
      throw std::invalid_argument("config: unknown key '" + item.key() + "' in " +
                                  where);
    }
  }
}

template <typename T>
void maybe_get(const json& j, const char* key, T& into) {
  if (!j.contains(key)) return;
  try {
    into = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("config: key '") + key +
                                "' has the wrong type");
  }
}

void load_window(const json& j, const char* key, MatchWindow& w) {
  if (!j.contains(key)) return;
  const json& sub = j.at(key);
  expect_keys(sub, std::string("windows.") + key, {"max_dt_s", "max_dist_km"});
  maybe_get(sub, "max_dt_s", w.max_dt_s);
  maybe_get(sub, "max_dist_km", w.max_dist_km);
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config '" + path + "': " + e.what());
  }
  expect_keys(j, "the top level",
              {"sar", "buoy", "precip", "humidity", "out_dir", "seed", "windows",
               "train", "flux"});
  PipelineConfig cfg;
  maybe_get(j, "sar", cfg.sar_path);
  maybe_get(j, "buoy", cfg.buoy_path);
  maybe_get(j, "precip", cfg.precip_path);
  maybe_get(j, "humidity", cfg.humidity_path);
  maybe_get(j, "out_dir", cfg.out_dir);
  maybe_get(j, "seed", cfg.seed);
  if (j.contains("windows")) {
    const json& w = j.at("windows");
    expect_keys(w, "windows", {"sar_buoy", "precip", "humidity"});
    load_window(w, "sar_buoy", cfg.windows.sar_buoy);
    load_window(w, "precip", cfg.windows.precip);
    load_window(w, "humidity", cfg.windows.humidity);
  }
  if (j.contains("train")) {
    const json& t = j.at("train");
    expect_keys(t, "train", {"epochs", "learning_rate", "train_fraction"});
    maybe_get(t, "epochs", cfg.train.epochs);
    maybe_get(t, "learning_rate", cfg.train.learning_rate);
    maybe_get(t, "train_fraction", cfg.train.train_fraction);
  }
  if (j.contains("flux")) {
    const json& f = j.at("flux");
    expect_keys(f, "flux", {"tol_ustar", "max_iter", "wind_floor"});
    maybe_get(f, "tol_ustar", cfg.flux.tol_ustar);
    maybe_get(f, "max_iter", cfg.flux.max_iter);
    maybe_get(f, "wind_floor", cfg.flux.wind_floor);
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// matchup CSV round trip

namespace {

const std::vector<std::string>& matchup_header() {
  static const std::vector<std::string> h = {
      "time_iso8601", "buoy_id",   "lat",
      "lon",          "sar_wind_10m", "buoy_wind_10m",
      "precip_mmhr",  "q10_kgkg",  "stability",
      "wind_ms",      "anemometer_height_m", "tair_c",
      "tsea_c",       "pres_hpa",  "hs_m",
      "tp_s"};
  return h;
}

}  // namespace

void write_matchups_csv(const std::vector<MatchupRecord>& rows,
                        const std::string& path, std::uint64_t seed) {
  ensure_parent_dir(path);
  CsvWriter w(path, matchup_header(), {seed_comment(seed)});
  for (const MatchupRecord& r : rows) {
    w.write_row({format_time_iso8601(r.time), r.buoy_id, format_double(r.lat),
                 format_double(r.lon), format_double(r.sar_wind_10m),
                 format_double(r.buoy_wind_10m), format_double(r.precip_mmhr),
                 format_double(r.q10_kgkg), std::to_string(r.stability),
                 format_double(r.wind_ms), format_double(r.anemometer_height_m),
                 format_double(r.tair_c), format_double(r.tsea_c),
                 format_double(r.pres_hpa), format_double(r.hs_m),
                 format_double(r.tp_s)});
  }
  w.close();
}

std::vector<MatchupRecord> read_matchups_csv(const std::string& path) {
  const CsvTable t = CsvTable::read_file(path);
  for (const std::string& col : matchup_header()) t.column(col);
  std::vector<MatchupRecord> out;
  out.reserve(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    MatchupRecord r;
    r.time = t.as_time(i, "time_iso8601");
    r.buoy_id = t.cell(i, t.column("buoy_id"));
    if (r.buoy_id.empty()) {
      throw ParseError(path, t.line_number(i), "buoy_id", "must not be empty");
    }
    r.lat = checked_lat(t, i);
    r.lon = checked_lon(t, i);
    r.sar_wind_10m = checked_range(t, i, "sar_wind_10m", 0.0, 200.0);
    r.buoy_wind_10m = checked_range(t, i, "buoy_wind_10m", 0.0, 200.0);
    r.precip_mmhr = checked_range(t, i, "precip_mmhr", 0.0, 1000.0);
    r.q10_kgkg = checked_range(t, i, "q10_kgkg", 0.0, 0.04);
    r.stability = checked_stability(t, i);
    r.wind_ms = checked_range(t, i, "wind_ms", 0.0, 100.0);
    r.anemometer_height_m = checked_anemometer(t, i);
    r.tair_c = checked_range(t, i, "tair_c", -5.0, 45.0);
    r.tsea_c = checked_range(t, i, "tsea_c", -5.0, 45.0);
    r.pres_hpa = checked_range(t, i, "pres_hpa", 800.0, 1100.0);
    r.hs_m = checked_wave(t, i, "hs_m");
    r.tp_s = checked_wave(t, i, "tp_s");
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// stages

MatchupStage cmd_matchup(const PipelineConfig& cfg) {
  cfg.validate();
  auto sar = read_geo_stream(cfg.sar_path, "wind10_ms", 0.0, 100.0);
  auto buoy = read_buoy_stream(cfg.buoy_path);
  auto precip = read_geo_stream(cfg.precip_path, "rain_mmhr", 0.0, 1000.0);
  auto humidity = read_geo_stream(cfg.humidity_path, "q10_kgkg", 0.0, 0.04);

  MatchupResult res = build_matchups(std::move(sar), std::move(buoy),
                                     std::move(precip), std::move(humidity),
                                     cfg.windows);

  const fs::path od(cfg.out_dir);
  write_matchups_csv(res.rows, (od / kMatchupsCsv).string(), cfg.seed);
  json manifest{{"tool_version", kToolVersion},
                {"seed", cfg.seed},
                {"windows",
                 {{"sar_buoy",
                   {{"max_dt_s", cfg.windows.sar_buoy.max_dt_s},
                    {"max_dist_km", cfg.windows.sar_buoy.max_dist_km}}},
                  {"precip",
                   {{"max_dt_s", cfg.windows.precip.max_dt_s},
                    {"max_dist_km", cfg.windows.precip.max_dist_km}}},
                  {"humidity",
                   {{"max_dt_s", cfg.windows.humidity.max_dt_s},
                    {"max_dist_km", cfg.windows.humidity.max_dist_km}}}}},
                {"counters", counters_json(res.counters)}};
  write_json_file(manifest, (od / kMatchupManifest).string());

  if (res.rows.empty()) {
    log_info("matchup: no collocations found; wrote an empty matchup file");
  } else {
    log_info("matchup: " + std::to_string(res.counters.emitted) + " rows from " +
             std::to_string(res.counters.sar_rows) + " scenes");
  }
  return MatchupStage{res.counters};
}

FluxStage cmd_flux(const PipelineConfig& cfg, const std::string& matchups_csv,
                   const std::string& wind_column, const std::string& out_csv) {
  validate_flux_options(cfg.flux);
  if (wind_column.empty()) {
    throw std::invalid_argument("flux: wind column name must not be empty");
  }
  const CsvTable t = CsvTable::read_file(matchups_csv);
  t.column(wind_column);
  for (const auto* col : {"tair_c", "tsea_c", "pres_hpa", "q10_kgkg"}) t.column(col);

  ensure_parent_dir(out_csv);
  CsvWriter w(out_csv,
              {"wind_10m", "u_star", "tau", "cd1000", "h_sensible", "e_latent",
               "obukhov_l", "z0", "u10n", "iterations", "converged"},
              {seed_comment(cfg.seed)});
  FluxStage st;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    MetSample s;
    s.u_wind = checked_range(t, i, wind_column, 0.0, 200.0);
    s.z_u = cfg.flux.constants.z_ref;
    s.z_t = cfg.flux.constants.z_ref;
    s.t_air = checked_range(t, i, "tair_c", -5.0, 45.0);
    s.t_sea = checked_range(t, i, "tsea_c", -5.0, 45.0);
    s.p_air = checked_range(t, i, "pres_hpa", 800.0, 1100.0);
    s.q_air = checked_range(t, i, "q10_kgkg", 0.0, 0.04);
    const FluxResult r = compute_fluxes(s, cfg.flux);
    ++st.rows;
    if (r.converged) ++st.converged;
    w.write_row({format_double(s.u_wind), format_double(r.u_star),
                 format_double(r.tau), format_double(r.cd1000),
                 format_double(r.h_sensible), format_double(r.e_latent),
                 format_double(r.obukhov_l), format_double(r.z0),
                 format_double(r.u10n), std::to_string(r.iterations),
                 r.converged ? "1" : "0"});
  }
  w.close();

  fs::path mpath(out_csv);
  mpath.replace_extension();
  mpath += "_manifest.json";
  write_json_file(json{{"tool_version", kToolVersion},
                       {"seed", cfg.seed},
                       {"wind_column", wind_column},
                       {"rows", st.rows},
                       {"converged", st.converged},
                       {"nonconverged", st.rows - st.converged}},
                  mpath.string());
  log_info("flux: " + std::to_string(st.rows) + " rows on column " + wind_column +
           ", " + std::to_string(st.rows - st.converged) + " not converged");
  return st;
}

TrainStage cmd_train(const PipelineConfig& cfg, const std::string& matchups_csv) {
  validate_train_options(cfg.train);
  const std::vector<MatchupRecord> rows = read_matchups_csv(matchups_csv);

  std::vector<FeatureVector> x;
  std::vector<double> y;
  x.reserve(rows.size());
  y.reserve(rows.size());
  for (const MatchupRecord& r : rows) {
    x.push_back(FeatureVector{r.sar_wind_10m, static_cast<double>(r.stability),
                              r.precip_mmhr});
    y.push_back(r.buoy_wind_10m);
  }

  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  const TrainResult tr = train(x, y, tc);

  const fs::path od(cfg.out_dir);
  fs::create_directories(od);
  save_model(tr.model, (od / kModelFile).string());

  CsvWriter hist((od / kHistoryCsv).string(), {"epoch", "train_mse"},
                 {seed_comment(cfg.seed)});
  for (std::size_t e = 0; e < tr.history.size(); ++e) {
    hist.write_row({std::to_string(e), format_double(tr.history[e])});
  }
  hist.close();

  write_json_file(json{{"tool_version", kToolVersion},
                       {"seed", cfg.seed},
                       {"n_rows", rows.size()},
                       {"train_fraction", tc.train_fraction},
                       {"train_indices", tr.train_indices},
                       {"test_indices", tr.test_indices}},
                  (od / kSplitManifest).string());

  TrainStage st;
  st.rows = rows.size();
  st.train_rows = tr.train_indices.size();
  st.test_rows = tr.test_indices.size();
  double sq = 0.0;
  for (const std::size_t i : tr.train_indices) {
    const double r = forward(tr.model, x[i]) - y[i];
    sq += r * r;
  }
  st.final_train_mse = sq / static_cast<double>(tr.train_indices.size());
  log_info("train: " + std::to_string(st.train_rows) + " train / " +
           std::to_string(st.test_rows) + " test rows, final mse " +
           format_double(st.final_train_mse));
  return st;
}

std::size_t cmd_correct(const PipelineConfig& cfg,
                        const std::string& matchups_csv,
                        const std::string& model_path,
                        const std::string& out_csv) {
  const MlpModel m = load_model(model_path);
  const CsvTable t = CsvTable::read_file(matchups_csv);
  if (t.has_column(kWindCorrected)) {
    throw ParseError(matchups_csv, 0, kWindCorrected, "column already present");
  }
  for (const auto* col : {kWindSar, "precip_mmhr", "stability"}) t.column(col);

  std::vector<std::string> header = t.header();
  header.push_back(kWindCorrected);
  ensure_parent_dir(out_csv);
  CsvWriter w(out_csv, header, {seed_comment(cfg.seed)});
  for (std::size_t i = 0; i < t.rows(); ++i) {
    FeatureVector f;
    f.sar_wind = checked_range(t, i, kWindSar, 0.0, 200.0);
    f.stability = static_cast<double>(checked_stability(t, i));
    f.precip = checked_range(t, i, "precip_mmhr", 0.0, 1000.0);
    const double corrected = std::max(0.0, forward(m, f));
    std::vector<std::string> cells;
    cells.reserve(header.size());
    for (std::size_t j = 0; j + 1 < header.size(); ++j) cells.push_back(t.cell(i, j));
    cells.push_back(format_double(corrected));
    w.write_row(cells);
  }
  w.close();
  log_info("correct: wrote " + std::to_string(t.rows()) + " rows");
  return t.rows();
}

// ---------------------------------------------------------------------------
// report

namespace {

struct FluxSeries {
  std::vector<double> wind, u_star, tau, cd1000, h_sensible, e_latent;
  std::vector<int> converged;
};

FluxSeries read_flux_csv(const std::string& path) {
  const CsvTable t = CsvTable::read_file(path);
  FluxSeries f;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    f.wind.push_back(t.as_double(i, "wind_10m"));
    f.u_star.push_back(t.as_double(i, "u_star"));
    f.tau.push_back(t.as_double(i, "tau"));
    f.cd1000.push_back(t.as_double(i, "cd1000"));
    f.h_sensible.push_back(t.as_double(i, "h_sensible"));
    f.e_latent.push_back(t.as_double(i, "e_latent"));
    const std::int64_t c = t.as_int(i, "converged");
    if (c != 0 && c != 1) {
      throw ParseError(path, t.line_number(i), "converged", "flag must be 0 or 1");
    }
    f.converged.push_back(static_cast<int>(c));
  }
  return f;
}

const std::vector<double>& series_of(const FluxSeries& f, const std::string& q) {
  if (q == "wind") return f.wind;
  if (q == "u_star") return f.u_star;
  if (q == "tau") return f.tau;
  if (q == "cd1000") return f.cd1000;
  if (q == "h_sensible") return f.h_sensible;
  return f.e_latent;
}

std::vector<double> take(const std::vector<double>& v,
                         const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (const std::size_t i : idx) out.push_back(v[i]);
  return out;
}

void write_density_csv(const DensityGrid& g, const std::string& path,
                       std::uint64_t seed) {
  CsvWriter w(path, {"x_center", "y_center", "count"}, {seed_comment(seed)});
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      const double xc = 0.5 * (g.x_edges[ix] + g.x_edges[ix + 1]);
      const double yc = 0.5 * (g.y_edges[iy] + g.y_edges[iy + 1]);
      w.write_row({format_double(xc), format_double(yc),
                   std::to_string(g.at(iy, ix))});
    }
  }
  w.close();
}

}  // namespace

ReportStage cmd_report(const PipelineConfig& cfg,
                       const std::string& buoy_fluxes_csv,
                       const std::string& raw_fluxes_csv,
                       const std::string& corrected_fluxes_csv,
                       const std::string& split_json) {
  const FluxSeries buoy = read_flux_csv(buoy_fluxes_csv);
  const FluxSeries raw = read_flux_csv(raw_fluxes_csv);
  const FluxSeries corr = read_flux_csv(corrected_fluxes_csv);
  const std::size_t n = buoy.wind.size();
  if (raw.wind.size() != n || corr.wind.size() != n) {
    throw std::domain_error("report: flux files disagree in row count (" +
                            std::to_string(n) + ", " +
                            std::to_string(raw.wind.size()) + ", " +
                            std::to_string(corr.wind.size()) + ")");
  }

  // Row selection: the test split when a split manifest is given, everything
  // otherwise. Rows where any of the three solves failed to converge are
  // excluded from the statistics but stay counted.
  std::vector<std::size_t> selected;
  std::string split_label = "all";
  if (!split_json.empty()) {
    const json s = read_json_file(split_json);
    if (!s.contains("test_indices") || !s.contains("n_rows")) {
      throw ParseError(split_json, 0, "",
                       "split manifest needs n_rows and test_indices");
    }
    if (s.at("n_rows").get<std::size_t>() != n) {
      throw std::domain_error("report: split manifest covers " +
                              s.at("n_rows").dump() + " rows but flux files have " +
                              std::to_string(n));
    }
    selected = s.at("test_indices").get<std::vector<std::size_t>>();
    std::sort(selected.begin(), selected.end());
    for (const std::size_t i : selected) {
      if (i >= n) {
        throw std::domain_error("report: split index " + std::to_string(i) +
                                " out of range");
      }
    }
    split_label = "test";
  } else {
    selected.resize(n);
    for (std::size_t i = 0; i < n; ++i) selected[i] = i;
  }

  std::vector<std::size_t> used;
  for (const std::size_t i : selected) {
    if (buoy.converged[i] && raw.converged[i] && corr.converged[i]) {
      used.push_back(i);
    }
  }

  const fs::path od(cfg.out_dir);
  fs::create_directories(od);

  const std::vector<std::string> quantities = {"wind",   "u_star",     "tau",
                                               "cd1000", "h_sensible", "e_latent"};
  struct Comparison {
    const char* name;
    const FluxSeries* test;
  };
  const Comparison comparisons[] = {{"raw_vs_buoy", &raw},
                                    {"corrected_vs_buoy", &corr}};

  CsvWriter stats((od / kStatsCsv).string(),
                  {"quantity", "comparison", "n", "bias", "rmse", "std"},
                  {seed_comment(cfg.seed)});
  json density_oor = json::object();
  for (const std::string& q : quantities) {
    const std::vector<double> ref = take(series_of(buoy, q), used);
    for (const Comparison& c : comparisons) {
      const std::vector<double> test = take(series_of(*c.test, q), used);
      if (used.empty()) {
        stats.write_row({q, c.name, "0", "nan", "nan", "nan"});
        continue;
      }
      const PairedSeries p{test, ref};
      stats.write_row({q, c.name, std::to_string(used.size()),
                       format_double(bias(p)), format_double(rmse(p)),
                       format_double(std_dev(p))});

      // Shared edges per quantity so raw and corrected grids are comparable.
      std::vector<double> edges;
      if (q == "wind") {
        edges = linear_edges(0.0, 25.0, 40);
      } else {
        double lo = *std::min_element(ref.begin(), ref.end());
        double hi = *std::max_element(ref.begin(), ref.end());
        for (const Comparison& cc : comparisons) {
          const std::vector<double> tv = take(series_of(*cc.test, q), used);
          lo = std::min(lo, *std::min_element(tv.begin(), tv.end()));
          hi = std::max(hi, *std::max_element(tv.begin(), tv.end()));
        }
        if (!(hi > lo)) {
          lo -= 0.5;
          hi += 0.5;
        }
        edges = linear_edges(lo, hi, 40);
      }
      const DensityGrid g = density_grid(p, edges, edges);
      const std::string fname = "density_" + q + "_" +
                                (c.test == &raw ? "raw" : "corrected") + ".csv";
      write_density_csv(g, (od / fname).string(), cfg.seed);
      density_oor[fname] = g.out_of_range;
    }
  }
  stats.close();

  // Wind-binned profiles: per-source means of each flux quantity in 1 m/s
  // bins of that source's own 10 m wind.
  const std::vector<std::string> profile_q = {"u_star", "tau", "cd1000",
                                              "h_sensible", "e_latent"};
  struct Source {
    const char* name;
    const FluxSeries* f;
  };
  const Source sources[] = {{"buoy", &buoy}, {"raw", &raw}, {"corrected", &corr}};
  constexpr std::size_t kProfileBins = 25;
  std::int64_t profile_oor = 0;

  CsvWriter prof((od / kProfilesCsv).string(),
                 {"quantity", "wind_source", "bin_center", "count", "mean"},
                 {seed_comment(cfg.seed)});
  for (const std::string& q : profile_q) {
    for (const Source& s : sources) {
      std::vector<std::int64_t> count(kProfileBins, 0);
      std::vector<double> sum(kProfileBins, 0.0);
      for (const std::size_t i : used) {
        const double wind = s.f->wind[i];
        if (wind < 0.0 || wind > 25.0) {
          ++profile_oor;
          continue;
        }
        std::size_t b = static_cast<std::size_t>(wind);
        if (b >= kProfileBins) b = kProfileBins - 1;  // closed last bin
        ++count[b];
        sum[b] += series_of(*s.f, q)[i];
      }
      for (std::size_t b = 0; b < kProfileBins; ++b) {
        const double center = static_cast<double>(b) + 0.5;
        const double mean =
            count[b] > 0 ? sum[b] / static_cast<double>(count[b]) : kNaN;
        prof.write_row({q, s.name, format_double(center),
                        std::to_string(count[b]), format_double(mean)});
      }
    }
  }
  prof.close();

  ReportStage st;
  st.rows_total = n;
  st.rows_used = used.size();
  st.rows_excluded = selected.size() - used.size();
  write_json_file(json{{"tool_version", kToolVersion},
                       {"seed", cfg.seed},
                       {"split", split_label},
                       {"rows_total", st.rows_total},
                       {"rows_selected", selected.size()},
                       {"rows_used", st.rows_used},
                       {"rows_excluded_nonconverged", st.rows_excluded},
                       {"density_out_of_range", density_oor},
                       {"profiles_out_of_range", profile_oor}},
                  (od / "report_manifest.json").string());
  log_info("report: " + std::to_string(st.rows_used) + " of " +
           std::to_string(selected.size()) + " selected rows used");
  return st;
}

void run_all(const PipelineConfig& cfg) {
  cfg.validate();
  const fs::path od(cfg.out_dir);
  fs::create_directories(od);

  const MatchupStage ms = cmd_matchup(cfg);
  const std::string matchups = (od / kMatchupsCsv).string();
  const TrainStage ts = cmd_train(cfg, matchups);
  const std::size_t corrected_rows = cmd_correct(
      cfg, matchups, (od / kModelFile).string(), (od / kCorrectedCsv).string());
  const FluxStage fb =
      cmd_flux(cfg, matchups, kWindBuoy, (od / kFluxesBuoyCsv).string());
  const FluxStage fr =
      cmd_flux(cfg, matchups, kWindSar, (od / kFluxesRawCsv).string());
  const FluxStage fc = cmd_flux(cfg, (od / kCorrectedCsv).string(), kWindCorrected,
                                (od / kFluxesCorrectedCsv).string());
  const ReportStage rs = cmd_report(
      cfg, (od / kFluxesBuoyCsv).string(), (od / kFluxesRawCsv).string(),
      (od / kFluxesCorrectedCsv).string(), (od / kSplitManifest).string());

  write_json_file(
      json{{"tool_version", kToolVersion},
           {"seed", cfg.seed},
           {"matchup", counters_json(ms.counters)},
           {"train",
            {{"rows", ts.rows},
             {"train_rows", ts.train_rows},
             {"test_rows", ts.test_rows},
             {"epochs", cfg.train.epochs},
             {"learning_rate", cfg.train.learning_rate},
             {"final_train_mse", ts.final_train_mse}}},
           {"correct", {{"rows", corrected_rows}}},
           {"flux",
            {{"buoy", {{"rows", fb.rows}, {"converged", fb.converged}}},
             {"raw", {{"rows", fr.rows}, {"converged", fr.converged}}},
             {"corrected", {{"rows", fc.rows}, {"converged", fc.converged}}}}},
           {"report",
            {{"rows_total", rs.rows_total},
             {"rows_used", rs.rows_used},
             {"rows_excluded_nonconverged", rs.rows_excluded}}}},
      (od / kRunManifest).string());
  log_info("run-all: complete");
}

}  // namespace airsea
