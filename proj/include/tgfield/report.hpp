// Verification suites over the built-in registry and their machine-readable reports.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "tgfield/field_analysis.hpp"
#include "tgfield/ode.hpp"

namespace tgfield {

inline constexpr int kSchemaVersion = 1;

enum class SuiteKind { Tg, Harmonic, Minimal, Classify, SffOracle, PhiCurvature, Trajectory };
enum class OutputFormat { Json, Csv };

std::string_view to_string(SuiteKind s);
/// Throws BadConfig for an unknown name.
SuiteKind parse_suite(std::string_view name);
std::string_view to_string(OutputFormat f);
OutputFormat parse_format(std::string_view name);

struct SuiteConfig {
  std::string manifold;
  std::string field;
  SuiteKind suite = SuiteKind::Tg;
  int samples = 200;
  std::uint64_t seed = 1;
  /// Check name -> tolerance; the key "*" applies to every check.
  std::map<std::string, double> tolerances;
  /// Reject overrides that name no check of this suite.
  bool strict_tolerances = true;
  std::string output;
  OutputFormat format = OutputFormat::Json;
};

/// Parses "1e-6" (all checks) or "name=1e-6"; throws BadConfig.
void add_tolerance_override(SuiteConfig& config, std::string_view spec);

struct ResidualReport {
  std::string name;
  int points = 0;
  double defect = 0.0;  // largest value over the points
  double tolerance = 0.0;
  bool pass = false;
};

struct TrajectoryRecord {
  Trajectory trajectory;
  /// Extra CSV columns, one value per sample.
  std::vector<std::string> extra_names;
  std::vector<std::vector<double>> extra;
};

struct SuiteResult {
  SuiteConfig config;
  std::vector<ResidualReport> checks;
  std::optional<ClassificationRecord> classification;
  /// Named scalar findings (for example the curvature under each scaling).
  std::map<std::string, double> values;
  std::map<std::string, std::string> notes;
  std::vector<TrajectoryRecord> trajectories;
  bool pass = false;
  double wall_seconds = 0.0;  // not serialized
};

/// Deterministic for a given config. Throws UnknownRegistryKey or BadConfig for invalid configs.
SuiteResult run_suite(const SuiteConfig& config);

/// Every suite that applies to the manifold/field pair.
std::vector<SuiteKind> applicable_suites(const SuiteConfig& config);

nlohmann::json to_json(const SuiteResult& result);
nlohmann::json to_json(const ClassificationRecord& record);
/// Pretty-printed JSON with a trailing newline.
std::string dump(const nlohmann::json& j);
/// name,points,defect,tolerance,verdict
std::string checks_csv(const SuiteResult& result);

/// One CSV per trajectory, named trajectory_<i>.csv; returns the written paths.
std::vector<std::filesystem::path> export_trajectories(const SuiteResult& result, const std::filesystem::path& dir);

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };
/// From TGFIELD_LOG: quiet|info|debug or 0|1|2; default info.
LogLevel log_level_from_env();

}  // namespace tgfield
