#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "grasstrack/config.hpp"

namespace grasstrack {

/// Per-batch geodesic distances between an estimated and the true
/// trajectory.
std::vector<double> subspace_error(const Trajectory& estimate,
                                   const Trajectory& truth);

/// Mean of errors[margin .. T-1-margin]. Requires 2 * margin < T.
double interior_mean(const std::vector<double>& errors, int margin);

/// What one tracker produced on a scenario.
struct TrackerResult {
  std::string name;
  TrackerMethod method = TrackerMethod::WindowedSvd;
  std::vector<double> errors;    // geodesic error per batch
  double interior_mean = 0.0;    // edges excluded per the run's margin
  double total_seconds = 0.0;    // includes initialization for RLS trackers
  double descent_seconds = 0.0;  // descent loop only; equals total for baselines
};

/// Everything a tracking run produced.
struct RunReport {
  ScenarioType scenario = ScenarioType::Geodesic;
  int batches = 0;
  int ambient_dim = 0;
  int subspace_dim = 0;
  int edge_margin = 0;
  std::vector<TrackerResult> trackers;
  /// Mean error of a memoryless rank-d SVD on data re-synthesized from the
  /// true subspaces at the scenario's batch size and noise level: the error
  /// attributable to noise alone (see README).
  double noise_floor = 0.0;
};

/// The scenario a config describes: ground truth plus synthesized batches.
struct Scenario {
  Trajectory truth;
  BatchSet data;
};

Scenario build_scenario(const RunConfig& cfg);

/// Runs every tracker of the config sequentially against one scenario and
/// collects per-batch errors and timings.
RunReport run_experiment(const RunConfig& cfg);

/// run_experiment plus files under out_dir: errors.csv (batch_index and one
/// column per tracker), timing.json (per-tracker seconds), report.json
/// (interior means, noise floor, scenario echo), and config_echo.cfg when
/// the config came from a file. Sequential runs with the same config and
/// seed produce byte-identical errors.csv.
RunReport run_experiment(const RunConfig& cfg,
                         const std::filesystem::path& out_dir);

/// Descent-loop timing of one RLS tracker in a bench comparison.
struct BenchEntry {
  std::string name;
  std::vector<double> repeat_seconds;
  double min_seconds = 0.0;
  /// min_seconds of the first-listed tracker divided by this tracker's:
  /// > 1 means faster than the first.
  double speedup_vs_first = 1.0;
};

struct BenchReport {
  int repeats = 0;
  std::vector<BenchEntry> entries;
};

/// Times the descent loops of the config's RLS trackers (two or more
/// required) from one identical initialization, repeats times each,
/// reporting the minimum. Baseline trackers in the config are ignored.
BenchReport bench_experiment(const RunConfig& cfg, int repeats = 3);

/// Writes the bench table as bench.json under out_dir.
void write_bench_report(const BenchReport& report,
                        const std::filesystem::path& out_dir);

/// Renders the bench table for the terminal.
std::string format_bench_table(const BenchReport& report);

/// Exports the scenario for external inspection: truth_####.csv and
/// batch_####.csv (headered CSV, row-major, full precision) plus
/// scenario.json with the dimensions.
void export_scenario(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace grasstrack
