#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stepprec/config.hpp"
#include "stepprec/error_model.hpp"
#include "stepprec/scheduler.hpp"
#include "stepprec/stats.hpp"

namespace stepprec {

inline constexpr int kReportSchemaVersion = 1;

struct ExperimentSetup {
  NoiseSchedule schedule;
  Denoiser model;
  std::vector<Eigen::VectorXd> samples;

  Measurer measurer() const { return Measurer(model, schedule, samples); }
};

/// Deterministic model, noise schedule and calibration set for a config.
ExperimentSetup build_setup(const ExperimentConfig& cfg);

/// `count` distinct uniformly random K-subsets (all of them when fewer exist).
std::vector<PrecisionSchedule> sample_schedules(int steps, int k, int count, std::mt19937_64& rng);

// ---------------------------------------------------------------------------

struct SchedulePoint {
  int k = 0;
  std::string bits;
  double s_up = 0.0;
  double s_down = 0.0;
  double error = 0.0;
};

/// Correlation of one predictor against measured E for one K (k = -1: all K pooled).
struct PredictorCorrelation {
  int k = 0;
  std::string predictor;  // "s_up" or "s_down"
  std::optional<CorrelationSummary> summary;  // empty when undefined (constant input)
};

struct AdditivityReport {
  int schema_version = kReportSchemaVersion;
  GainProfile upcast;
  GainProfile downcast;
  double all_quantized_error = 0.0;
  double nonlinear_fraction = 0.0;
  std::optional<CorrelationSummary> single_step;  // upcast vs downcast curves
  std::vector<SchedulePoint> points;
  std::vector<PredictorCorrelation> correlations;

  const PredictorCorrelation* find(int k, const std::string& predictor) const;
};

AdditivityReport run_validate_additivity(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------

struct CalibrationReport {
  int schema_version = kReportSchemaVersion;
  std::optional<LatencyBudget> budget;  // empty when K was given explicitly
  int k = 0;
  BisectionState state;
  GainProfile profile;
  std::string schedule_bits;
  double schedule_error = 0.0;
  double all_quantized_error = 0.0;
  LipschitzReport lipschitz;
  std::optional<GainProfile> reference;           // fully measured, test mode only
  std::optional<RankDeviationCurve> rank_deviation;
  std::vector<std::string> warnings;
};

/// K from `full_steps` if set, else from (target_speedup, quant_speedup).
/// Throws ConfigError when neither is available, InfeasibleTargetError when r > lambda.
std::pair<int, std::optional<LatencyBudget>> resolve_full_steps(const ExperimentConfig& cfg);

/// `full_measure` additionally measures every timestep and records the
/// rank-deviation curve of each bisection iteration against it.
CalibrationReport run_calibrate(const ExperimentConfig& cfg, bool full_measure = false);

// ---------------------------------------------------------------------------

struct ParetoRow {
  int k = 0;
  double speedup = 1.0;
  double error = 0.0;
  std::string bits;
};

struct ParetoReport {
  int schema_version = kReportSchemaVersion;
  double quant_speedup = 1.0;
  GainProfile profile;
  std::vector<ParetoRow> rows;  // ascending K
  bool error_non_increasing = true;
  bool strictly_decreasing_where_positive = true;
};

ParetoReport run_pareto(const ExperimentConfig& cfg, bool full_measure = false);

// ---------------------------------------------------------------------------

struct MixModelsReport {
  int schema_version = kReportSchemaVersion;
  GainProfile sensitivity;  // E(large everywhere but small at t)
  int small_steps = 0;
  std::string ours_bits;
  std::string heuristic_bits;
  double ours_error = 0.0;
  double heuristic_error = 0.0;
};

/// Large model = configured denoiser without quantization error; small model
/// adds a substitution error drawn from stream "small-model".
MixModelsReport run_mix_models(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------

struct BruteForceRow {
  int k = 0;
  std::string greedy_bits;
  double greedy_error = 0.0;
  std::string optimal_bits;
  double optimal_error = 0.0;
  std::uint64_t evaluated = 0;

  double gap() const { return greedy_error - optimal_error; }
};

struct BruteForceReport {
  int schema_version = kReportSchemaVersion;
  GainProfile profile;  // fully measured upcast gains
  std::vector<BruteForceRow> rows;
};

/// Greedy (on fully measured gains) against exhaustive search for each K in
/// `ks` (all of 0..T when empty). Throws CapacityError past the cap.
BruteForceReport run_brute_force(const ExperimentConfig& cfg, std::vector<int> ks = {});

}  // namespace stepprec
