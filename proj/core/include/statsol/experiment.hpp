#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace statsol {

/// One acceptance check inside an experiment report.
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// A named numeric table; emitted as one CSV artifact.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<Table> tables;

  bool passed() const;
};

/// Flat JSON experiment configuration. Keys are validated on parse: unknown
/// keys and out-of-range values are rejected with the offending key named.
/// Serialization is canonical (sorted keys, shortest round-trip numbers), so
/// identical configs produce identical bytes.
class ExperimentConfig {
 public:
  using Value = std::variant<double, bool, std::string, std::vector<double>>;

  static ExperimentConfig from_file(const std::filesystem::path& path);
  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;

  const std::string& experiment() const { return experiment_; }
  std::uint64_t seed() const;

  bool has(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  bool flag_or(const std::string& key, bool fallback) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  std::vector<double> list_or(const std::string& key, std::vector<double> fallback) const;

  bool operator==(const ExperimentConfig& other) const = default;

 private:
  std::string experiment_;
  std::map<std::string, Value> values_;
};

/// Names of the bundled experiment pipelines.
std::vector<std::string> experiment_names();

/// One-line summary of an experiment's configuration keys.
std::string experiment_key_summary(const std::string& name);

/// Runs the named pipeline: deterministic for a fixed config, one table per
/// artifact, one check per acceptance condition.
Report run_experiment(const ExperimentConfig& config);

/// Writes summary.json plus one CSV per table into out_dir; returns the
/// written paths. Content depends only on the report (no timestamps).
std::vector<std::filesystem::path> emit_report(const Report& report,
                                               const std::filesystem::path& out_dir);

}  // namespace statsol
