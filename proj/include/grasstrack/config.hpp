#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grasstrack/baselines.hpp"
#include "grasstrack/optimizer.hpp"
#include "grasstrack/scenarios.hpp"

namespace grasstrack {

/// One key = value entry of a config section, with its source line for
/// diagnostics.
struct ConfigEntry {
  std::string value;
  int line = 0;
};

/// A [section] block of an experiment config file.
struct ConfigSection {
  std::string name;
  int line = 0;
  std::map<std::string, ConfigEntry> entries;
};

/// Minimal structured-text config format: [section] or [section.sub]
/// headers, key = value lines, # comments, blank lines ignored. Duplicate
/// sections or keys are errors, as is any content before the first header.
class ConfigDoc {
 public:
  static ConfigDoc parse_file(const std::filesystem::path& path);
  static ConfigDoc parse_string(const std::string& text,
                                const std::string& source_name);

  const std::vector<ConfigSection>& sections() const { return sections_; }
  const ConfigSection* find(const std::string& name) const;
  const std::string& source_name() const { return source_name_; }

 private:
  std::vector<ConfigSection> sections_;
  std::string source_name_;
};

/// Typed, consumption-tracked reader over one section. Every key must be
/// read exactly once; reject_unknown() turns leftovers into ConfigError
/// with file/line diagnostics (unknown keys fail fast).
class SectionReader {
 public:
  SectionReader(const ConfigDoc& doc, const ConfigSection& section);

  std::string require_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double require_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  int require_int(const std::string& key);
  int get_int(const std::string& key, int fallback);
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback);
  bool get_bool(const std::string& key, bool fallback);

  bool has(const std::string& key) const;
  void reject_unknown() const;

 private:
  std::optional<std::string> take(const std::string& key);
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  const ConfigDoc& doc_;
  const ConfigSection& section_;
  std::map<std::string, bool> consumed_;
};

enum class ScenarioType { Geodesic, Array };

enum class TrackerMethod {
  WindowedSvd,
  SingleGeodesic,
  RlsPosGeodesic,
  RlsPosChordal,
  RlsVelChordal,
};

bool is_rls(TrackerMethod method);
std::string to_string(TrackerMethod method);
TrackerMethod tracker_method_from_string(const std::string& text);

/// One tracker entry of an experiment: a name (the CSV column), a method,
/// and the method's own knobs.
struct TrackerConfig {
  std::string name;
  TrackerMethod method = TrackerMethod::WindowedSvd;
  WindowSpec window;        // windowed-svd
  int endpoint_window = 2;  // single-geodesic
  DescentConfig descent;    // rls-*
  int init_window = 2;      // windowed-SVD initialization for rls-*
};

/// A full experiment: one scenario, a list of trackers, output options.
struct RunConfig {
  ScenarioType scenario_type = ScenarioType::Geodesic;
  GeodesicScenarioConfig geodesic;
  ArrayScenarioConfig array;
  std::vector<TrackerConfig> trackers;
  std::filesystem::path output_dir = "out";
  int edge_margin = 5;
  std::filesystem::path source_path;  // config file this was read from

  static RunConfig from_file(const std::filesystem::path& path);

  std::uint64_t seed() const {
    return scenario_type == ScenarioType::Geodesic ? geodesic.seed : array.seed;
  }
  void set_seed(std::uint64_t seed) {
    geodesic.seed = seed;
    array.seed = seed;
  }
  int batches() const {
    return scenario_type == ScenarioType::Geodesic ? geodesic.batches
                                                   : array.batches;
  }
  double noise_sigma() const {
    return scenario_type == ScenarioType::Geodesic ? geodesic.noise_sigma
                                                   : array.noise_sigma;
  }
  /// Turns parallel gradient evaluation on or off for every RLS tracker.
  void set_parallel(bool parallel) {
    for (TrackerConfig& tracker : trackers) tracker.descent.parallel = parallel;
  }
};

}  // namespace grasstrack
