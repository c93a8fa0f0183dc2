#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stepprec/noise_schedule.hpp"
#include "stepprec/synthetic.hpp"

namespace stepprec {

/// Raised for any config problem; the message names the offending key.
class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Everything needed to reproduce a run. Loaded from flat `key = value`
/// text; unknown keys are rejected.
struct ExperimentConfig {
  std::string experiment = "validate-additivity";

  // process
  int steps = 20;
  AlphaKind alpha_kind = AlphaKind::linear_alpha;
  double alpha_min = 0.05;
  double alpha_max = 0.999;

  // model
  DenoiserSpec model;

  std::uint64_t seed = 0;

  // calibration
  int samples = 128;
  int budget = 0;  // 0 selects min(T, 13)
  std::optional<double> quant_speedup;   // lambda
  std::optional<double> target_speedup;  // r
  std::optional<int> full_steps;         // explicit K, overrides (r, lambda)
  std::uint64_t enumeration_cap = std::uint64_t{1} << 20;

  // validate-additivity
  int schedules_per_k = 20;
  std::vector<int> validate_ks{2, 6, 10, 14, 18};

  // calibrate (rank-deviation reference)
  std::vector<int> rank_ks{2, 3, 4, 5};

  // pareto (empty selects 0..T)
  std::vector<int> pareto_ks;

  // mix-models: small-model substitution error
  ErrorProfile small_profile = ErrorProfile::spiky;
  ErrorStructure small_structure = ErrorStructure::gaussian;
  double small_scale = 0.05;
  int small_steps = 4;

  int resolved_budget() const { return budget > 0 ? budget : std::min(steps, 13); }

  /// Field-level checks; throws ConfigError.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Writes every field, defaults expanded, in the format `parse_config` reads.
void write_config(std::ostream& os, const ExperimentConfig& cfg);

std::vector<int> parse_int_list(const std::string& text);

}  // namespace stepprec
