// End-to-end checks of the command-line tool: subcommands, output files,
// and the exit-code contract (1 config, 2 numerical, 3 i/o).
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string command =
      std::string(GRASSTRACK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(command.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh_dir(const std::string& leaf) {
  fs::path dir = fs::temp_directory_path() / "grasstrack_cli" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  fs::path path = dir / "experiment.cfg";
  std::ofstream out(path);
  out << text;
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const char* kTrackConfig =
    "[scenario]\n"
    "type = geodesic\n"
    "ambient_dim = 16\n"
    "subspace_dim = 3\n"
    "batches = 12\n"
    "batch_size = 5\n"
    "seed = 3\n"
    "[output]\nedge_margin = 2\n"
    "[tracker.svd2]\nmethod = windowed-svd\nwindow = 2\n"
    "[tracker.rls]\nmethod = rls-pos-chordal\n"
    "lambda = 50\nlearning_rate = 1e-4\niterations = 10\n";

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("track writes its reports and exits zero") {
  fs::path dir = fresh_dir("track");
  fs::path cfg = write_config(dir, kTrackConfig);
  fs::path out = dir / "out";
  CHECK(run_cli("track --config " + cfg.string() + " --out " + out.string()) ==
        0);
  CHECK(fs::exists(out / "errors.csv"));
  CHECK(fs::exists(out / "timing.json"));
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "config_echo.cfg"));
}

TEST_CASE("seed override changes the results") {
  fs::path dir = fresh_dir("seed");
  fs::path cfg = write_config(dir, kTrackConfig);
  REQUIRE(run_cli("track --config " + cfg.string() + " --out " +
                  (dir / "a").string()) == 0);
  REQUIRE(run_cli("track --config " + cfg.string() + " --out " +
                  (dir / "b").string() + " --seed 99") == 0);
  CHECK(read_file(dir / "a" / "errors.csv") !=
        read_file(dir / "b" / "errors.csv"));
}

TEST_CASE("bench and simulate subcommands run end to end") {
  fs::path dir = fresh_dir("bench");
  fs::path cfg = write_config(dir,
                              "[scenario]\n"
                              "type = geodesic\n"
                              "ambient_dim = 24\n"
                              "subspace_dim = 4\n"
                              "batches = 10\n"
                              "batch_size = 5\n"
                              "seed = 4\n"
                              "[tracker.geo]\nmethod = rls-pos-geodesic\n"
                              "lambda = 100\nlearning_rate = 1e-4\n"
                              "iterations = 15\n"
                              "[tracker.cho]\nmethod = rls-pos-chordal\n"
                              "lambda = 50\nlearning_rate = 1e-4\n"
                              "iterations = 15\n");
  fs::path out = dir / "out";
  CHECK(run_cli("bench --config " + cfg.string() + " --out " + out.string() +
                " --repeats 2") == 0);
  CHECK(fs::exists(out / "bench.json"));

  fs::path sim_out = dir / "sim";
  CHECK(run_cli("simulate --config " + cfg.string() + " --out " +
                sim_out.string()) == 0);
  CHECK(fs::exists(sim_out / "truth_0000.csv"));
  CHECK(fs::exists(sim_out / "batch_0009.csv"));
  CHECK(fs::exists(sim_out / "scenario.json"));
}

TEST_CASE("config errors exit with code 1") {
  fs::path dir = fresh_dir("badcfg");
  fs::path cfg = write_config(dir,
                              "[scenario]\n"
                              "type = geodesic\n"
                              "mystery = 1\n"
                              "[tracker.a]\nmethod = windowed-svd\n");
  CHECK(run_cli("track --config " + cfg.string() + " --out " +
                (dir / "out").string()) == 1);
  CHECK(run_cli("definitely-not-a-subcommand") == 1);
}

TEST_CASE("numerical errors exit with code 2") {
  fs::path dir = fresh_dir("numerical");
  // One batch of 4 samples cannot support a rank-10 windowed estimate.
  fs::path cfg = write_config(dir,
                              "[scenario]\n"
                              "type = geodesic\n"
                              "batches = 12\n"
                              "batch_size = 4\n"
                              "seed = 3\n"
                              "[tracker.svd]\nmethod = windowed-svd\nwindow = 1\n");
  CHECK(run_cli("track --config " + cfg.string() + " --out " +
                (dir / "out").string()) == 2);
}

TEST_CASE("i/o errors exit with code 3") {
  fs::path dir = fresh_dir("io");
  CHECK(run_cli("track --config " + (dir / "absent.cfg").string() + " --out " +
                (dir / "out").string()) == 3);
}

TEST_SUITE_END();
