// End-to-end checks of the installed command line. Each check runs the real
// binary through the shell and inspects exit codes and produced files. One
// "ok - ..." line per check; any failure flips the process exit code.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_checks = 0;
int g_failures = 0;

void check(bool ok, const std::string& name) {
  ++g_checks;
  if (ok) {
    std::cout << "ok - " << name << "\n";
  } else {
    ++g_failures;
    std::cout << "FAIL - " << name << "\n";
  }
}

// Exit code of a shell command, with output captured to a file.
int run(const std::string& cmd, const std::string& log) {
  const std::string full = cmd + " > " + log + " 2>&1";
  const int status = std::system(full.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string config_json(const std::string& fixtures, const std::string& sar) {
  return std::string("{\n") + "  \"sar\": \"" + sar + "\",\n" +
         "  \"buoy\": \"" + fixtures + "/buoy.csv\",\n" +
         "  \"precip\": \"" + fixtures + "/precip.csv\",\n" +
         "  \"humidity\": \"" + fixtures + "/humidity.csv\",\n" +
         "  \"seed\": 42\n}\n";
}

}  // namespace

int main() {
  const std::string cli = AIRSEA_CLI_PATH;
  const std::string fixtures = AIRSEA_FIXTURE_DIR;

  char tmpl[] = "clitest_XXXXXX";
  if (!mkdtemp(tmpl)) {
    std::cerr << "cannot create work directory\n";
    return 1;
  }
  const fs::path work(tmpl);
  const std::string log = (work / "log.txt").string();

  const std::string cfg = (work / "cfg.json").string();
  write_file(cfg, config_json(fixtures, fixtures + "/sar.csv"));

  // version and usage
  check(run(cli + " --version", log) == 0 &&
            slurp(log).find("0.1.0") != std::string::npos,
        "--version exits 0 and prints the tool version");
  check(run(cli, log) == 1, "no subcommand is a usage error");
  check(run(cli + " --help", log) == 0 && slurp(log).find("run-all") != std::string::npos,
        "--help exits 0 and lists the subcommands");
  check(run(cli + " flux --wind-column bogus", log) == 1,
        "an unknown wind column is rejected at the command line");
  check(run(cli + " matchup", log) == 1, "matchup without a config is a usage error");

  // config errors are usage errors
  const std::string badkey = (work / "badkey.json").string();
  write_file(badkey, "{\"sar\": \"x\", \"buoy\": \"y\", \"precip\": \"z\", "
                     "\"humidity\": \"w\", \"typo\": 1}");
  check(run(cli + " matchup -c " + badkey, log) == 1 &&
            slurp(log).find("typo") != std::string::npos,
        "an unknown config key exits 1 and is named");

  // malformed input data is a data error
  const std::string badcfg = (work / "badsar.json").string();
  write_file(badcfg, config_json(fixtures, fixtures + "/bad_sar.csv"));
  const std::string badout = (work / "outbad").string();
  check(run(cli + " matchup -c " + badcfg + " -o " + badout, log) == 2 &&
            slurp(log).find("bad_sar.csv:3") != std::string::npos,
        "a bad input row exits 2 and names file and line");

  // a working matchup
  const std::string out1 = (work / "out1").string();
  check(run(cli + " matchup -c " + cfg + " -o " + out1, log) == 0 &&
            fs::exists(out1 + "/matchups.csv") &&
            fs::exists(out1 + "/matchup_manifest.json"),
        "matchup exits 0 and writes the matchup file and manifest");

  // stages wired by their defaults inside the output directory
  check(run(cli + " train -c " + cfg + " -o " + out1, log) == 0 &&
            fs::exists(out1 + "/model.txt") && fs::exists(out1 + "/split.json"),
        "train picks up the matchups and writes model and split");
  check(run(cli + " correct -c " + cfg + " -o " + out1, log) == 0 &&
            fs::exists(out1 + "/matchups_corrected.csv"),
        "correct appends the corrected wind column");
  check(run(cli + " flux -c " + cfg + " -o " + out1 + " --wind-column buoy_wind_10m",
            log) == 0 &&
            fs::exists(out1 + "/fluxes_buoy.csv"),
        "flux solves the buoy wind column");

  // missing inputs at the data level exit 2
  const std::string out2 = (work / "out2").string();
  fs::create_directories(out2);
  check(run(cli + " report -c " + cfg + " -o " + out2 + " --all-rows", log) == 2,
        "report on missing flux files exits 2");
  check(run(cli + " train -c " + cfg + " -o " + out2, log) == 2,
        "train on a missing matchup file exits 2");

  // the full chain, twice, must reproduce itself byte for byte
  const std::string ra = (work / "ra").string();
  const std::string rb = (work / "rb").string();
  const bool ra_ok = run(cli + " run-all -c " + cfg + " -o " + ra, log) == 0;
  const bool rb_ok = run(cli + " run-all -c " + cfg + " -o " + rb, log) == 0;
  check(ra_ok && rb_ok && fs::exists(ra + "/run_manifest.json") &&
            fs::exists(ra + "/stats.csv"),
        "run-all exits 0 and writes the report");
  check(ra_ok && rb_ok &&
            run("diff -r " + ra + " " + rb, log) == 0,
        "two identical run-all invocations produce byte-identical trees");

  // a different seed changes the outputs
  const std::string rc = (work / "rc").string();
  const bool rc_ok =
      run(cli + " run-all -c " + cfg + " -o " + rc + " --seed 7", log) == 0;
  check(rc_ok && run("diff -r " + ra + " " + rc, log) != 0,
        "a different seed produces a different tree");

  std::cout << g_checks - g_failures << " of " << g_checks << " checks passed\n";
  if (g_failures == 0) fs::remove_all(work);
  return g_failures == 0 ? 0 : 1;
}
