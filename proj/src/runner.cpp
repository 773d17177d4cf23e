#include "grasstrack/runner.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace grasstrack {

namespace {

using Clock = std::chrono::steady_clock;
using OrderedJson = nlohmann::ordered_json;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Shortest decimal form that round-trips the exact double.
std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

int scenario_subspace_dim(const RunConfig& cfg) {
  return cfg.scenario_type == ScenarioType::Geodesic
             ? cfg.geodesic.subspace_dim
             : cfg.array.subspace_dim();
}

/// Error attributable to noise alone: for each batch, re-synthesize data
/// from the true subspace (signal = the batch's projection coefficients,
/// noise redrawn at the scenario's sigma) and measure the rank-d SVD error.
double noise_floor_estimate(const Trajectory& truth, const BatchSet& data,
                            double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int d = truth.subspace_dim();
  double sum = 0.0;
  for (int t = 0; t < truth.length(); ++t) {
    Matrix coeffs = truth[t].basis().transpose() * data[t];
    Matrix noise = gaussian_matrix(rng, truth.ambient_dim(), data.batch_size());
    Matrix resynth = truth[t].basis() * coeffs + sigma * noise;
    sum += geodesic_distance(truncated_svd_subspace(resynth, d), truth[t]);
  }
  return sum / truth.length();
}

TrackerResult run_tracker(const TrackerConfig& tracker, const Scenario& scenario,
                          int d, int edge_margin) {
  TrackerResult result;
  result.name = tracker.name;
  result.method = tracker.method;

  const auto start = Clock::now();
  Trajectory estimate = [&] {
    switch (tracker.method) {
      case TrackerMethod::WindowedSvd:
        return windowed_svd_track(scenario.data, d, tracker.window);
      case TrackerMethod::SingleGeodesic:
        return single_geodesic_fit(scenario.data, d, tracker.endpoint_window);
      default: {
        Trajectory init = windowed_svd_track(scenario.data, d,
                                             WindowSpec{tracker.init_window});
        DescentReport report = rls_descend(init, scenario.data, tracker.descent);
        result.descent_seconds = report.descent_seconds;
        return std::move(report.trajectory);
      }
    }
  }();
  result.total_seconds = seconds_since(start);
  if (!is_rls(tracker.method)) result.descent_seconds = result.total_seconds;

  result.errors = subspace_error(estimate, scenario.truth);
  result.interior_mean = interior_mean(result.errors, edge_margin);
  return result;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ostringstream out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    out << (j == 0 ? "" : ",") << "c" << j;
  }
  out << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (j == 0 ? "" : ",") << format_double(m(i, j));
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string());
}

OrderedJson scenario_echo(const RunConfig& cfg) {
  OrderedJson echo;
  if (cfg.scenario_type == ScenarioType::Geodesic) {
    echo["type"] = "geodesic";
    echo["ambient_dim"] = cfg.geodesic.ambient_dim;
    echo["subspace_dim"] = cfg.geodesic.subspace_dim;
    echo["batches"] = cfg.geodesic.batches;
    echo["batch_size"] = cfg.geodesic.batch_size;
    echo["tangent_norm"] = cfg.geodesic.tangent_norm;
    echo["noise_sigma"] = cfg.geodesic.noise_sigma;
    echo["seed"] = cfg.geodesic.seed;
  } else {
    echo["type"] = "array";
    echo["grid_rows"] = cfg.array.grid_rows;
    echo["grid_cols"] = cfg.array.grid_cols;
    echo["spacing"] = cfg.array.spacing;
    echo["emitters"] = cfg.array.num_emitters;
    echo["batches"] = cfg.array.batches;
    echo["batch_size"] = cfg.array.batch_size;
    echo["noise_sigma"] = cfg.array.noise_sigma;
    echo["walk_step_std"] = cfg.array.walk_step_std;
    echo["elevation_min"] = cfg.array.elevation_min;
    echo["elevation_max"] = cfg.array.elevation_max;
    echo["seed"] = cfg.array.seed;
  }
  return echo;
}

}  // namespace

std::vector<double> subspace_error(const Trajectory& estimate,
                                   const Trajectory& truth) {
  if (estimate.length() != truth.length() ||
      !estimate[0].same_shape(truth[0])) {
    throw DimensionMismatch(
        "estimate and truth trajectories differ in length or dimensions");
  }
  std::vector<double> errors(estimate.length());
  for (int t = 0; t < estimate.length(); ++t) {
    errors[t] = geodesic_distance(estimate[t], truth[t]);
  }
  return errors;
}

double interior_mean(const std::vector<double>& errors, int margin) {
  const int count = static_cast<int>(errors.size());
  if (margin < 0 || 2 * margin >= count) {
    throw ConfigError("edge margin " + std::to_string(margin) +
                      " leaves no interior batches out of " +
                      std::to_string(count));
  }
  double sum = 0.0;
  for (int t = margin; t < count - margin; ++t) sum += errors[t];
  return sum / (count - 2 * margin);
}

Scenario build_scenario(const RunConfig& cfg) {
  if (cfg.scenario_type == ScenarioType::Geodesic) {
    Trajectory truth = random_geodesic_trajectory(cfg.geodesic);
    BatchSet data = synthesize_batches(truth, cfg.geodesic.batch_size,
                                       cfg.geodesic.noise_sigma,
                                       cfg.geodesic.seed + 1);
    return {std::move(truth), std::move(data)};
  }
  Trajectory truth = array_truth_trajectory(cfg.array);
  BatchSet data = synthesize_batches(truth, cfg.array.batch_size,
                                     cfg.array.noise_sigma, cfg.array.seed + 1);
  return {std::move(truth), std::move(data)};
}

RunReport run_experiment(const RunConfig& cfg) {
  if (cfg.trackers.empty()) {
    throw ConfigError("experiment needs at least one tracker");
  }
  const Scenario scenario = build_scenario(cfg);
  const int d = scenario_subspace_dim(cfg);

  RunReport report;
  report.scenario = cfg.scenario_type;
  report.batches = scenario.truth.length();
  report.ambient_dim = scenario.truth.ambient_dim();
  report.subspace_dim = d;
  report.edge_margin = cfg.edge_margin;
  for (const TrackerConfig& tracker : cfg.trackers) {
    report.trackers.push_back(
        run_tracker(tracker, scenario, d, cfg.edge_margin));
  }
  report.noise_floor = noise_floor_estimate(scenario.truth, scenario.data,
                                            cfg.noise_sigma(), cfg.seed() + 2);
  return report;
}

RunReport run_experiment(const RunConfig& cfg,
                         const std::filesystem::path& out_dir) {
  RunReport report = run_experiment(cfg);
  ensure_directory(out_dir);

  std::ostringstream csv;
  csv << "batch_index";
  for (const TrackerResult& tracker : report.trackers) csv << "," << tracker.name;
  csv << "\n";
  for (int t = 0; t < report.batches; ++t) {
    csv << t;
    for (const TrackerResult& tracker : report.trackers) {
      csv << "," << format_double(tracker.errors[t]);
    }
    csv << "\n";
  }
  write_text_file(out_dir / "errors.csv", csv.str());

  OrderedJson timing;
  timing["trackers"] = OrderedJson::object();
  for (const TrackerResult& tracker : report.trackers) {
    timing["trackers"][tracker.name] = {
        {"total_seconds", tracker.total_seconds},
        {"descent_seconds", tracker.descent_seconds},
    };
  }
  write_text_file(out_dir / "timing.json", timing.dump(2) + "\n");

  OrderedJson summary;
  summary["scenario"] = scenario_echo(cfg);
  summary["edge_margin"] = report.edge_margin;
  summary["noise_floor"] = report.noise_floor;
  summary["trackers"] = OrderedJson::object();
  for (const TrackerResult& tracker : report.trackers) {
    summary["trackers"][tracker.name] = {
        {"method", to_string(tracker.method)},
        {"interior_mean_error", tracker.interior_mean},
        {"total_seconds", tracker.total_seconds},
        {"descent_seconds", tracker.descent_seconds},
    };
  }
  write_text_file(out_dir / "report.json", summary.dump(2) + "\n");

  if (!cfg.source_path.empty()) {
    std::error_code ec;
    std::filesystem::copy_file(cfg.source_path, out_dir / "config_echo.cfg",
                               std::filesystem::copy_options::overwrite_existing,
                               ec);
    if (ec) throw IoError("cannot copy config to " + out_dir.string());
  }
  return report;
}

BenchReport bench_experiment(const RunConfig& cfg, int repeats) {
  if (repeats < 1) throw ConfigError("bench needs at least one repeat");
  std::vector<const TrackerConfig*> rls_trackers;
  for (const TrackerConfig& tracker : cfg.trackers) {
    if (is_rls(tracker.method)) rls_trackers.push_back(&tracker);
  }
  if (rls_trackers.size() < 2) {
    throw ConfigError("bench needs at least two RLS trackers on one scenario");
  }

  const Scenario scenario = build_scenario(cfg);
  const int d = scenario_subspace_dim(cfg);
  // One shared initialization keeps the comparison apples to apples; the
  // first RLS tracker's init window defines it.
  const Trajectory init = windowed_svd_track(
      scenario.data, d, WindowSpec{rls_trackers.front()->init_window});

  BenchReport report;
  report.repeats = repeats;
  report.entries.resize(rls_trackers.size());
  for (std::size_t i = 0; i < rls_trackers.size(); ++i) {
    report.entries[i].name = rls_trackers[i]->name;
  }
  for (int r = 0; r < repeats; ++r) {
    for (std::size_t i = 0; i < rls_trackers.size(); ++i) {
      DescentConfig descent = rls_trackers[i]->descent;
      descent.record_history = false;
      DescentReport result = rls_descend(init, scenario.data, descent);
      report.entries[i].repeat_seconds.push_back(result.descent_seconds);
    }
  }
  for (BenchEntry& entry : report.entries) {
    entry.min_seconds =
        *std::min_element(entry.repeat_seconds.begin(), entry.repeat_seconds.end());
  }
  for (BenchEntry& entry : report.entries) {
    entry.speedup_vs_first = report.entries.front().min_seconds / entry.min_seconds;
  }
  return report;
}

void write_bench_report(const BenchReport& report,
                        const std::filesystem::path& out_dir) {
  ensure_directory(out_dir);
  OrderedJson doc;
  doc["repeats"] = report.repeats;
  doc["trackers"] = OrderedJson::object();
  for (const BenchEntry& entry : report.entries) {
    doc["trackers"][entry.name] = {
        {"min_descent_seconds", entry.min_seconds},
        {"repeat_seconds", entry.repeat_seconds},
        {"speedup_vs_first", entry.speedup_vs_first},
    };
  }
  write_text_file(out_dir / "bench.json", doc.dump(2) + "\n");
}

std::string format_bench_table(const BenchReport& report) {
  std::ostringstream out;
  out << "tracker                      min seconds   speedup vs first\n";
  for (const BenchEntry& entry : report.entries) {
    out << entry.name;
    for (std::size_t i = entry.name.size(); i < 29; ++i) out << ' ';
    std::string seconds = format_double(entry.min_seconds);
    out << seconds;
    for (std::size_t i = seconds.size(); i < 14; ++i) out << ' ';
    out << format_double(entry.speedup_vs_first) << "\n";
  }
  return out.str();
}

void export_scenario(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  const Scenario scenario = build_scenario(cfg);
  ensure_directory(out_dir);
  char name[32];
  for (int t = 0; t < scenario.truth.length(); ++t) {
    std::snprintf(name, sizeof(name), "truth_%04d.csv", t);
    write_matrix_csv(out_dir / name, scenario.truth[t].basis());
    std::snprintf(name, sizeof(name), "batch_%04d.csv", t);
    write_matrix_csv(out_dir / name, scenario.data[t]);
  }
  OrderedJson manifest;
  manifest["scenario"] = scenario_echo(cfg);
  manifest["batches"] = scenario.truth.length();
  manifest["ambient_dim"] = scenario.truth.ambient_dim();
  manifest["subspace_dim"] = scenario.truth.subspace_dim();
  manifest["batch_size"] = scenario.data.batch_size();
  write_text_file(out_dir / "scenario.json", manifest.dump(2) + "\n");
}

}  // namespace grasstrack
