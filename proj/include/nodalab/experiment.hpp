#pragma once

#include "nodalab/manifest.hpp"
#include "nodalab/scaling.hpp"
#include "nodalab/spectra.hpp"

#include <optional>

namespace nodalab {

enum class ExperimentKind { spectrum, nodal, chain, capacity, heat_bounds, scaling, fit };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::nodal;
  Geometry geometry;
  /// Torus eigenspace levels n (λ = 4π²n).
  std::vector<int> levels;
  /// Box product modes m.
  std::vector<std::vector<int>> modes;
  std::vector<std::uint64_t> seeds;
  double samples_per_wavelength = 16.0;
  /// Grid resolution; 0 picks the sampling floor.
  int resolution = 0;
  double zero_tolerance = 1e-9;
  std::vector<double> deltas;
  std::vector<int> A;
  std::vector<std::string> shapes;
  /// Concentric condenser radii.
  double a = 0.1;
  double b = 0.3;
  double condenser_spacing = 1.0 / 48.0;
  int balls_per_field = 20;
  std::vector<double> times;
  /// fit: long-format table, quantity to fit, model.
  std::string table;
  std::string quantity;
  ScalingModel model = ScalingModel::pure_power;
  std::string output_dir = "out";

  bool operator==(const ExperimentConfig& other) const;
};

/// Every violated precondition, one message each.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Throws ConfigError listing every missing or mistyped field.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Empty when the config satisfies all preconditions.
std::vector<std::string> validate(const ExperimentConfig& config);

/// One row of a long-format sweep table.
struct LongRow {
  double lambda = 0.0;
  int n = 0;
  std::uint64_t seed = 0;
  std::string quantity;
  double value = 0.0;
};

void write_long_csv(std::ostream& out, const std::vector<LongRow>& rows);
std::vector<LongRow> read_long_csv(const std::filesystem::path& path);

/// A field of a sweep: box product mode or random element of a torus eigenspace.
struct FieldInstance {
  std::string id;
  EigenMode mode;
  /// Level n for tori, Σ m_i² for boxes.
  int n = 0;
  std::uint64_t seed = 0;
};

/// Fields of the config; empty eigenspace levels are reported in `skipped`.
std::vector<FieldInstance> enumerate_fields(const ExperimentConfig& config,
                                            std::vector<InstanceRecord>* skipped = nullptr);

int field_resolution(const ExperimentConfig& config, const EigenMode& mode);

struct RunResult {
  Manifest manifest;
  /// 0 success, 3 when an instance failed.
  int exit_code = 0;
};

/// Validates, computes, and writes every artifact plus manifest.json into output_dir.
/// Throws ConfigError before any computation when the config is invalid.
RunResult run_experiment(const ExperimentConfig& config);

}  // namespace nodalab
