// Command line front end for the air-sea flux and wind-correction pipeline.
//
// Exit codes: 0 success, 1 usage or configuration problem, 2 data problem
// (malformed inputs, schema violations, training divergence, I/O failure).

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "airsea/errors.hpp"
#include "airsea/pipeline.hpp"

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts* o, bool config_required) {
  auto* copt = cmd->add_option("-c,--config", o->config_path,
                               "JSON config file with paths and parameters");
  if (config_required) copt->required();
  cmd->add_option("-o,--out", o->out_dir, "output directory (overrides config)");
  cmd->add_option("--seed", o->seed, "RNG seed (overrides config)");
}

airsea::PipelineConfig make_config(const CommonOpts& o) {
  airsea::PipelineConfig cfg;
  if (!o.config_path.empty()) cfg = airsea::load_config(o.config_path);
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

std::string under_out(const airsea::PipelineConfig& cfg, const char* name) {
  return (fs::path(cfg.out_dir) / name).string();
}

int run_stage(const std::function<void()>& fn) {
  try {
    fn();
    return 0;
  } catch (const airsea::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const airsea::TrainingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"air-sea flux and SAR wind correction pipeline"};
  app.set_version_flag("--version", airsea::kToolVersion);
  app.require_subcommand(1);

  // matchup
  CommonOpts mo;
  std::string sar_in, buoy_in, precip_in, humidity_in;
  CLI::App* matchup =
      app.add_subcommand("matchup", "collocate SAR, buoy, precip and humidity");
  add_common(matchup, &mo, true);
  matchup->add_option("--sar", sar_in, "SAR wind CSV (overrides config)");
  matchup->add_option("--buoy", buoy_in, "buoy CSV (overrides config)");
  matchup->add_option("--precip", precip_in, "precipitation CSV (overrides config)");
  matchup->add_option("--humidity", humidity_in, "humidity CSV (overrides config)");

  // train
  CommonOpts to;
  std::string train_matchups;
  CLI::App* train_cmd =
      app.add_subcommand("train", "fit the wind correction net on matchups");
  add_common(train_cmd, &to, false);
  train_cmd->add_option("--matchups", train_matchups,
                        "matchup CSV (default <out>/matchups.csv)");

  // correct
  CommonOpts co;
  std::string correct_matchups, model_path, correct_out;
  CLI::App* correct_cmd =
      app.add_subcommand("correct", "append corrected winds to a matchup file");
  add_common(correct_cmd, &co, false);
  correct_cmd->add_option("--matchups", correct_matchups,
                          "matchup CSV (default <out>/matchups.csv)");
  correct_cmd->add_option("--model", model_path,
                          "model file (default <out>/model.txt)");
  correct_cmd->add_option("--out-file", correct_out,
                          "output CSV (default <out>/matchups_corrected.csv)");

  // flux
  CommonOpts fo;
  std::string flux_matchups, wind_column = airsea::kWindBuoy, flux_out;
  CLI::App* flux_cmd =
      app.add_subcommand("flux", "bulk fluxes over one wind column");
  add_common(flux_cmd, &fo, false);
  flux_cmd->add_option("--matchups", flux_matchups,
                       "matchup CSV (default <out>/matchups.csv)");
  flux_cmd
      ->add_option("--wind-column", wind_column, "wind column to solve on")
      ->check(CLI::IsMember({airsea::kWindBuoy, airsea::kWindSar,
                             airsea::kWindCorrected}));
  flux_cmd->add_option("--out-file", flux_out,
                       "output CSV (default <out>/fluxes_<source>.csv)");

  // report
  CommonOpts ro;
  std::string buoy_fluxes, raw_fluxes, corrected_fluxes, split_path;
  bool all_rows = false;
  CLI::App* report_cmd =
      app.add_subcommand("report", "error statistics, density grids, profiles");
  add_common(report_cmd, &ro, false);
  report_cmd->add_option("--buoy-fluxes", buoy_fluxes,
                         "reference fluxes (default <out>/fluxes_buoy.csv)");
  report_cmd->add_option("--raw-fluxes", raw_fluxes,
                         "raw SAR fluxes (default <out>/fluxes_raw.csv)");
  report_cmd->add_option("--corrected-fluxes", corrected_fluxes,
                         "corrected fluxes (default <out>/fluxes_corrected.csv)");
  report_cmd->add_option("--split", split_path,
                         "split manifest (default <out>/split.json)");
  report_cmd->add_flag("--all-rows", all_rows,
                       "use every row instead of the test split");

  // run-all
  CommonOpts ao;
  std::string asar, abuoy, aprecip, ahumidity;
  CLI::App* all_cmd = app.add_subcommand("run-all", "the full pipeline in order");
  add_common(all_cmd, &ao, true);
  all_cmd->add_option("--sar", asar, "SAR wind CSV (overrides config)");
  all_cmd->add_option("--buoy", abuoy, "buoy CSV (overrides config)");
  all_cmd->add_option("--precip", aprecip, "precipitation CSV (overrides config)");
  all_cmd->add_option("--humidity", ahumidity, "humidity CSV (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (matchup->parsed()) {
    return run_stage([&] {
      airsea::PipelineConfig cfg = make_config(mo);
      if (!sar_in.empty()) cfg.sar_path = sar_in;
      if (!buoy_in.empty()) cfg.buoy_path = buoy_in;
      if (!precip_in.empty()) cfg.precip_path = precip_in;
      if (!humidity_in.empty()) cfg.humidity_path = humidity_in;
      airsea::cmd_matchup(cfg);
    });
  }
  if (train_cmd->parsed()) {
    return run_stage([&] {
      const airsea::PipelineConfig cfg = make_config(to);
      const std::string matchups = train_matchups.empty()
                                       ? under_out(cfg, airsea::kMatchupsCsv)
                                       : train_matchups;
      airsea::cmd_train(cfg, matchups);
    });
  }
  if (correct_cmd->parsed()) {
    return run_stage([&] {
      const airsea::PipelineConfig cfg = make_config(co);
      const std::string matchups = correct_matchups.empty()
                                       ? under_out(cfg, airsea::kMatchupsCsv)
                                       : correct_matchups;
      const std::string model =
          model_path.empty() ? under_out(cfg, airsea::kModelFile) : model_path;
      const std::string out = correct_out.empty()
                                  ? under_out(cfg, airsea::kCorrectedCsv)
                                  : correct_out;
      airsea::cmd_correct(cfg, matchups, model, out);
    });
  }
  if (flux_cmd->parsed()) {
    return run_stage([&] {
      const airsea::PipelineConfig cfg = make_config(fo);
      std::string matchups = flux_matchups;
      if (matchups.empty()) {
        matchups = wind_column == airsea::kWindCorrected
                       ? under_out(cfg, airsea::kCorrectedCsv)
                       : under_out(cfg, airsea::kMatchupsCsv);
      }
      std::string out = flux_out;
      if (out.empty()) {
        const char* name = airsea::kFluxesBuoyCsv;
        if (wind_column == airsea::kWindSar) name = airsea::kFluxesRawCsv;
        if (wind_column == airsea::kWindCorrected) name = airsea::kFluxesCorrectedCsv;
        out = under_out(cfg, name);
      }
      airsea::cmd_flux(cfg, matchups, wind_column, out);
    });
  }
  if (report_cmd->parsed()) {
    return run_stage([&] {
      const airsea::PipelineConfig cfg = make_config(ro);
      const std::string bf = buoy_fluxes.empty()
                                 ? under_out(cfg, airsea::kFluxesBuoyCsv)
                                 : buoy_fluxes;
      const std::string rf = raw_fluxes.empty()
                                 ? under_out(cfg, airsea::kFluxesRawCsv)
                                 : raw_fluxes;
      const std::string cf = corrected_fluxes.empty()
                                 ? under_out(cfg, airsea::kFluxesCorrectedCsv)
                                 : corrected_fluxes;
      std::string split;
      if (!all_rows) {
        split = split_path.empty() ? under_out(cfg, airsea::kSplitManifest)
                                   : split_path;
      }
      airsea::cmd_report(cfg, bf, rf, cf, split);
    });
  }
  return run_stage([&] {
    airsea::PipelineConfig cfg = make_config(ao);
    if (!asar.empty()) cfg.sar_path = asar;
    if (!abuoy.empty()) cfg.buoy_path = abuoy;
    if (!aprecip.empty()) cfg.precip_path = aprecip;
    if (!ahumidity.empty()) cfg.humidity_path = ahumidity;
    airsea::run_all(cfg);
  });
}
