#pragma once

// Batch pipeline: CSV ingestion with schema validation, the matchup, flux,
// train, correct and report stages, and the run-all orchestration. Every
// stage is deterministic for fixed inputs, config and seed, and reruns are
// byte-identical.

#include <cstdint>
#include <string>
#include <vector>

#include "airsea/colocate.hpp"
#include "airsea/flux.hpp"
#include "airsea/mlp.hpp"

namespace airsea {

inline constexpr const char* kToolVersion = "0.1.0";

// Canonical output names inside the output directory.
inline constexpr const char* kMatchupsCsv = "matchups.csv";
inline constexpr const char* kMatchupManifest = "matchup_manifest.json";
inline constexpr const char* kModelFile = "model.txt";
inline constexpr const char* kHistoryCsv = "history.csv";
inline constexpr const char* kSplitManifest = "split.json";
inline constexpr const char* kCorrectedCsv = "matchups_corrected.csv";
inline constexpr const char* kFluxesBuoyCsv = "fluxes_buoy.csv";
inline constexpr const char* kFluxesRawCsv = "fluxes_raw.csv";
inline constexpr const char* kFluxesCorrectedCsv = "fluxes_corrected.csv";
inline constexpr const char* kStatsCsv = "stats.csv";
inline constexpr const char* kProfilesCsv = "profiles.csv";
inline constexpr const char* kRunManifest = "run_manifest.json";

// Wind column selectors accepted by the flux stage.
inline constexpr const char* kWindBuoy = "buoy_wind_10m";
inline constexpr const char* kWindSar = "sar_wind_10m";
inline constexpr const char* kWindCorrected = "corrected_wind_10m";

struct PipelineConfig {
  std::string sar_path;
  std::string buoy_path;
  std::string precip_path;
  std::string humidity_path;
  MatchupWindows windows{};
  TrainConfig train{};  // its seed field is ignored; the global seed rules
  FluxOptions flux{};
  std::uint64_t seed = 0;
  std::string out_dir = "out";

  // Throws std::invalid_argument on missing paths, duplicate paths or
  // non-positive windows and tolerances.
  void validate() const;
};

// Read a JSON config file. Missing keys keep their defaults; unknown keys
// are rejected. Throws std::invalid_argument on malformed content.
PipelineConfig load_config(const std::string& path);

// Matchup rows as written to / read from matchups.csv. Reading validates the
// schema and throws ParseError naming file, line and column.
void write_matchups_csv(const std::vector<MatchupRecord>& rows,
                        const std::string& path, std::uint64_t seed);
std::vector<MatchupRecord> read_matchups_csv(const std::string& path);

struct MatchupStage {
  MatchupCounters counters;
};

// Ingest the four input streams, collocate, write matchups.csv and the
// matchup manifest. An empty result is a success with zero rows.
MatchupStage cmd_matchup(const PipelineConfig& cfg);

struct FluxStage {
  std::int64_t rows = 0;
  std::int64_t converged = 0;
};

// Run the flux solver over one wind column of a matchup file. Non-converged
// rows are written with converged=0, never dropped. Writes out_csv plus a
// manifest named after it.
FluxStage cmd_flux(const PipelineConfig& cfg, const std::string& matchups_csv,
                   const std::string& wind_column, const std::string& out_csv);

struct TrainStage {
  std::size_t rows = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  double final_train_mse = 0.0;
};

// Train the correction net on (sar wind, stability, precip) -> buoy wind.
// Writes the model file, per-epoch history.csv and the split manifest with
// the row indices of both splits.
TrainStage cmd_train(const PipelineConfig& cfg, const std::string& matchups_csv);

// Apply a saved model to every row, appending a corrected_wind_10m column
// (clamped below at zero). Returns the row count.
std::size_t cmd_correct(const PipelineConfig& cfg,
                        const std::string& matchups_csv,
                        const std::string& model_path,
                        const std::string& out_csv);

struct ReportStage {
  std::size_t rows_total = 0;     // rows in the flux files
  std::size_t rows_used = 0;      // rows entering the statistics
  std::size_t rows_excluded = 0;  // dropped: not converged under every wind
};

// Compare raw and corrected winds (and their fluxes) against the buoy
// reference: stats.csv, per-quantity density grids and wind-binned profiles.
// With a split manifest only test rows enter the statistics; pass an empty
// path to use all rows.
ReportStage cmd_report(const PipelineConfig& cfg,
                       const std::string& buoy_fluxes_csv,
                       const std::string& raw_fluxes_csv,
                       const std::string& corrected_fluxes_csv,
                       const std::string& split_json);

// The full chain: matchup, train, correct, flux on all three winds, report,
// plus a run manifest aggregating every stage counter.
void run_all(const PipelineConfig& cfg);

}  // namespace airsea
