// Experiment runner for Grassmannian subspace tracking: generates synthetic
// scenarios, runs baseline and regularized-least-squares trackers, and writes
// per-batch error and timing reports.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "grasstrack/runner.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> edge_margin;
  bool parallel = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "experiment config file")
      ->required();
  cmd->add_option("--out", flags.out_dir,
                  "output directory (overrides [output] directory)");
  cmd->add_option("--seed", flags.seed, "seed override");
  cmd->add_option("--edge-margin", flags.edge_margin,
                  "batches excluded per side from interior means");
  cmd->add_flag("--parallel", flags.parallel,
                "evaluate RLS gradients on worker threads "
                "(thread count via GRASSTRACK_THREADS)");
}

grasstrack::RunConfig load_config(const CommonFlags& flags) {
  grasstrack::RunConfig cfg = grasstrack::RunConfig::from_file(flags.config_path);
  if (!flags.out_dir.empty()) cfg.output_dir = flags.out_dir;
  if (flags.seed) cfg.set_seed(*flags.seed);
  if (flags.edge_margin) cfg.edge_margin = *flags.edge_margin;
  if (flags.parallel) cfg.set_parallel(true);
  return cfg;
}

int run_track(const CommonFlags& flags) {
  grasstrack::RunConfig cfg = load_config(flags);
  grasstrack::RunReport report = grasstrack::run_experiment(cfg, cfg.output_dir);
  std::cout << "scenario: "
            << (report.scenario == grasstrack::ScenarioType::Geodesic
                    ? "geodesic"
                    : "array")
            << ", T=" << report.batches << ", G(" << report.ambient_dim << ","
            << report.subspace_dim << ")\n";
  std::cout << "noise floor (mean error): " << report.noise_floor << "\n";
  for (const grasstrack::TrackerResult& tracker : report.trackers) {
    std::cout << tracker.name << ": interior mean error "
              << tracker.interior_mean << ", " << tracker.total_seconds
              << " s total";
    if (grasstrack::is_rls(tracker.method)) {
      std::cout << " (" << tracker.descent_seconds << " s descent loop)";
    }
    std::cout << "\n";
  }
  std::cout << "results written to " << cfg.output_dir.string() << "\n";
  return 0;
}

int run_bench(const CommonFlags& flags, int repeats) {
  grasstrack::RunConfig cfg = load_config(flags);
  grasstrack::BenchReport report = grasstrack::bench_experiment(cfg, repeats);
  std::cout << grasstrack::format_bench_table(report);
  grasstrack::write_bench_report(report, cfg.output_dir);
  std::cout << "bench table written to "
            << (cfg.output_dir / "bench.json").string() << "\n";
  return 0;
}

int run_simulate(const CommonFlags& flags) {
  grasstrack::RunConfig cfg = load_config(flags);
  grasstrack::export_scenario(cfg, cfg.output_dir);
  std::cout << "scenario exported to " << cfg.output_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grassmannian subspace-tracking experiments"};
  app.require_subcommand(1);

  CommonFlags flags;
  int repeats = 3;

  CLI::App* simulate =
      app.add_subcommand("simulate", "generate a scenario and export it as CSV");
  add_common_flags(simulate, flags);

  CLI::App* track =
      app.add_subcommand("track", "run all configured trackers and write reports");
  add_common_flags(track, flags);

  CLI::App* bench = app.add_subcommand(
      "bench", "time the RLS descent loops from one shared initialization");
  add_common_flags(bench, flags);
  bench->add_option("--repeats", repeats, "timing repeats (minimum is reported)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (simulate->parsed()) return run_simulate(flags);
    if (track->parsed()) return run_track(flags);
    return run_bench(flags, repeats);
  } catch (const grasstrack::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const grasstrack::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const grasstrack::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
