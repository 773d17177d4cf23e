#include "grasstrack/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace grasstrack {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' &&
        c != '.') {
      return false;
    }
  }
  return true;
}

}  // namespace

ConfigDoc ConfigDoc::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path.string());
}

ConfigDoc ConfigDoc::parse_string(const std::string& text,
                                  const std::string& source_name) {
  ConfigDoc doc;
  doc.source_name_ = source_name;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  ConfigSection* current = nullptr;

  auto fail = [&](const std::string& what) {
    throw ConfigError(source_name + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) fail("invalid section name '" + name + "'");
      if (doc.find(name) != nullptr) fail("duplicate section [" + name + "]");
      doc.sections_.push_back(ConfigSection{name, line_no, {}});
      current = &doc.sections_.back();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value' or a [section]");
    if (current == nullptr) fail("entry appears before any [section] header");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_name(key)) fail("invalid key '" + key + "'");
    if (value.empty()) fail("key '" + key + "' has an empty value");
    if (current->entries.count(key) > 0) {
      fail("duplicate key '" + key + "' in section [" + current->name + "]");
    }
    current->entries[key] = ConfigEntry{value, line_no};
  }
  return doc;
}

const ConfigSection* ConfigDoc::find(const std::string& name) const {
  for (const ConfigSection& section : sections_) {
    if (section.name == name) return &section;
  }
  return nullptr;
}

SectionReader::SectionReader(const ConfigDoc& doc, const ConfigSection& section)
    : doc_(doc), section_(section) {
  for (const auto& [key, entry] : section_.entries) consumed_[key] = false;
}

std::optional<std::string> SectionReader::take(const std::string& key) {
  const auto it = section_.entries.find(key);
  if (it == section_.entries.end()) return std::nullopt;
  consumed_[key] = true;
  return it->second.value;
}

void SectionReader::fail(const std::string& key, const std::string& what) const {
  const auto it = section_.entries.find(key);
  const int line = it != section_.entries.end() ? it->second.line : section_.line;
  throw ConfigError(doc_.source_name() + ":" + std::to_string(line) + ": [" +
                    section_.name + "] " + key + ": " + what);
}

std::string SectionReader::require_string(const std::string& key) {
  auto value = take(key);
  if (!value) fail(key, "required key is missing");
  return *value;
}

std::string SectionReader::get_string(const std::string& key,
                                      const std::string& fallback) {
  return take(key).value_or(fallback);
}

double SectionReader::require_double(const std::string& key) {
  const std::string text = require_string(key);
  try {
    std::size_t used = 0;
    const double parsed = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return parsed;
  } catch (const std::exception&) {
    fail(key, "'" + text + "' is not a number");
  }
}

double SectionReader::get_double(const std::string& key, double fallback) {
  return has(key) ? require_double(key) : fallback;
}

int SectionReader::require_int(const std::string& key) {
  const std::string text = require_string(key);
  int parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), parsed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(key, "'" + text + "' is not an integer");
  }
  return parsed;
}

int SectionReader::get_int(const std::string& key, int fallback) {
  return has(key) ? require_int(key) : fallback;
}

std::uint64_t SectionReader::get_uint64(const std::string& key,
                                        std::uint64_t fallback) {
  if (!has(key)) return fallback;
  const std::string text = require_string(key);
  std::uint64_t parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), parsed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(key, "'" + text + "' is not an unsigned integer");
  }
  return parsed;
}

bool SectionReader::get_bool(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const std::string text = require_string(key);
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  fail(key, "'" + text + "' is not a boolean");
}

bool SectionReader::has(const std::string& key) const {
  return section_.entries.count(key) > 0;
}

void SectionReader::reject_unknown() const {
  for (const auto& [key, was_consumed] : consumed_) {
    if (!was_consumed) fail(key, "unknown key");
  }
}

bool is_rls(TrackerMethod method) {
  return method == TrackerMethod::RlsPosGeodesic ||
         method == TrackerMethod::RlsPosChordal ||
         method == TrackerMethod::RlsVelChordal;
}

std::string to_string(TrackerMethod method) {
  switch (method) {
    case TrackerMethod::WindowedSvd: return "windowed-svd";
    case TrackerMethod::SingleGeodesic: return "single-geodesic";
    case TrackerMethod::RlsPosGeodesic: return "rls-pos-geodesic";
    case TrackerMethod::RlsPosChordal: return "rls-pos-chordal";
    case TrackerMethod::RlsVelChordal: return "rls-vel-chordal";
  }
  return "unknown";
}

TrackerMethod tracker_method_from_string(const std::string& text) {
  if (text == "windowed-svd") return TrackerMethod::WindowedSvd;
  if (text == "single-geodesic") return TrackerMethod::SingleGeodesic;
  if (text == "rls-pos-geodesic") return TrackerMethod::RlsPosGeodesic;
  if (text == "rls-pos-chordal") return TrackerMethod::RlsPosChordal;
  if (text == "rls-vel-chordal") return TrackerMethod::RlsVelChordal;
  throw ConfigError("unknown tracker method '" + text + "'");
}

namespace {

RegularizerKind regularizer_for(TrackerMethod method) {
  switch (method) {
    case TrackerMethod::RlsPosGeodesic: return RegularizerKind::PositionGeodesic;
    case TrackerMethod::RlsPosChordal: return RegularizerKind::PositionChordal;
    case TrackerMethod::RlsVelChordal: return RegularizerKind::VelocityChordal;
    default:
      throw ConfigError("tracker method " + to_string(method) +
                        " has no regularizer");
  }
}

TrackerConfig read_tracker(const ConfigDoc& doc, const ConfigSection& section) {
  TrackerConfig tracker;
  tracker.name = section.name.substr(std::string("tracker.").size());
  if (tracker.name.empty()) {
    throw ConfigError(doc.source_name() + ":" + std::to_string(section.line) +
                      ": tracker section needs a name, e.g. [tracker.svd2]");
  }
  SectionReader reader(doc, section);
  tracker.method = tracker_method_from_string(reader.require_string("method"));
  switch (tracker.method) {
    case TrackerMethod::WindowedSvd:
      tracker.window.window_batches = reader.get_int("window", 2);
      break;
    case TrackerMethod::SingleGeodesic:
      tracker.endpoint_window = reader.get_int("endpoint_window", 2);
      break;
    default: {
      tracker.descent.kind = regularizer_for(tracker.method);
      tracker.descent.lambda = reader.get_double("lambda", 1000.0);
      tracker.descent.learning_rate = reader.get_double("learning_rate", 1e-5);
      tracker.descent.iterations = reader.get_int("iterations", 100);
      tracker.init_window = reader.get_int("init_window", 2);
      break;
    }
  }
  reader.reject_unknown();
  return tracker;
}

}  // namespace

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  const ConfigDoc doc = ConfigDoc::parse_file(path);
  RunConfig cfg;
  cfg.source_path = path;

  const ConfigSection* scenario = doc.find("scenario");
  if (scenario == nullptr) {
    throw ConfigError(doc.source_name() + ": missing [scenario] section");
  }
  SectionReader reader(doc, *scenario);
  const std::string type = reader.require_string("type");
  if (type == "geodesic") {
    cfg.scenario_type = ScenarioType::Geodesic;
    GeodesicScenarioConfig& g = cfg.geodesic;
    g.ambient_dim = reader.get_int("ambient_dim", g.ambient_dim);
    g.subspace_dim = reader.get_int("subspace_dim", g.subspace_dim);
    g.batches = reader.get_int("batches", g.batches);
    g.batch_size = reader.get_int("batch_size", g.batch_size);
    g.tangent_norm = reader.get_double("tangent_norm", g.tangent_norm);
    g.noise_sigma = reader.get_double("noise_sigma", g.noise_sigma);
    g.seed = reader.get_uint64("seed", g.seed);
  } else if (type == "array") {
    cfg.scenario_type = ScenarioType::Array;
    ArrayScenarioConfig& a = cfg.array;
    a.grid_rows = reader.get_int("grid_rows", a.grid_rows);
    a.grid_cols = reader.get_int("grid_cols", a.grid_cols);
    a.spacing = reader.get_double("spacing", a.spacing);
    a.num_emitters = reader.get_int("emitters", a.num_emitters);
    a.batches = reader.get_int("batches", a.batches);
    a.batch_size = reader.get_int("batch_size", a.batch_size);
    a.noise_sigma = reader.get_double("noise_sigma", a.noise_sigma);
    a.walk_step_std = reader.get_double("walk_step_std", a.walk_step_std);
    a.elevation_min = reader.get_double("elevation_min", a.elevation_min);
    a.elevation_max = reader.get_double("elevation_max", a.elevation_max);
    a.seed = reader.get_uint64("seed", a.seed);
  } else {
    throw ConfigError(doc.source_name() + ": scenario type must be " +
                      "'geodesic' or 'array', got '" + type + "'");
  }
  reader.reject_unknown();

  if (const ConfigSection* output = doc.find("output")) {
    SectionReader out_reader(doc, *output);
    cfg.output_dir = out_reader.get_string("directory", cfg.output_dir.string());
    cfg.edge_margin = out_reader.get_int("edge_margin", cfg.edge_margin);
    out_reader.reject_unknown();
  }

  for (const ConfigSection& section : doc.sections()) {
    if (section.name.rfind("tracker.", 0) == 0) {
      cfg.trackers.push_back(read_tracker(doc, section));
    } else if (section.name != "scenario" && section.name != "output") {
      throw ConfigError(doc.source_name() + ":" + std::to_string(section.line) +
                        ": unknown section [" + section.name + "]");
    }
  }
  if (cfg.trackers.empty()) {
    throw ConfigError(doc.source_name() +
                      ": at least one [tracker.<name>] section is required");
  }
  for (std::size_t i = 0; i < cfg.trackers.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.trackers.size(); ++j) {
      if (cfg.trackers[i].name == cfg.trackers[j].name) {
        throw ConfigError(doc.source_name() + ": duplicate tracker name '" +
                          cfg.trackers[i].name + "'");
      }
    }
  }
  if (cfg.edge_margin < 0) {
    throw ConfigError(doc.source_name() + ": edge_margin must be >= 0");
  }
  return cfg;
}

}  // namespace grasstrack
