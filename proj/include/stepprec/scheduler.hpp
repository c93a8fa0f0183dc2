#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "stepprec/error_model.hpp"
#include "stepprec/gain_profile.hpp"
#include "stepprec/precision_schedule.hpp"

namespace stepprec {

// ---------------------------------------------------------------------------
// Latency budget

/// Amdahl budget: r = T / (K + (T - K) / lambda), solved for K and floored.
struct LatencyBudget {
  int steps = 0;
  double target_speedup = 1.0;  // r
  double quant_speedup = 1.0;   // lambda
  double exact_k = 0.0;         // un-floored T (lambda - r) / (r (lambda - 1))
  int k = 0;
};

LatencyBudget compute_budget(int steps, double target_speedup, double quant_speedup);

/// Modeled end-to-end speedup of a schedule with `full_steps` full-precision steps.
double modeled_speedup(int steps, double full_steps, double quant_speedup);

// ---------------------------------------------------------------------------
// Adaptive bisection

/// Unmeasured interior between two adjacent measured timesteps.
struct Segment {
  int left = 0;
  int right = 0;
  int width() const { return right - left; }
};

struct BisectionState {
  int budget = 0;
  std::vector<int> anchors;            // initial measured set, ascending
  std::vector<int> measurement_order;  // every measured t, in evaluation order
  std::map<int, double> measurements;
  std::vector<Segment> segments;       // remaining unmeasured interiors

  /// Number of post-anchor measurements taken.
  int iterations() const {
    return static_cast<int>(measurement_order.size() - anchors.size());
  }
};

struct BisectionResult {
  GainProfile profile;  // measured + interpolated
  BisectionState state;
};

using GainOracle = std::function<double(int)>;

int default_bisection_budget(int steps);

/// Measures anchors {1, floor(T/2), T}, then repeatedly measures the floored
/// midpoint of the segment with the largest endpoint-average gain (ties: wider,
/// then leftmost) until `budget` timesteps are measured or none remain.
BisectionResult bisection_calibrate(const GainOracle& measure, int steps, int budget,
                                    GainKind kind = GainKind::upcast);

BisectionResult bisection_calibrate(const Measurer& measurer, int budget,
                                    GainKind kind = GainKind::upcast);

/// Interpolated profile as it stood after `iteration` post-anchor measurements.
GainProfile profile_after(const BisectionState& state, GainKind kind, int steps, int iteration);

// ---------------------------------------------------------------------------
// Schedule extraction

/// Full precision at the K largest gains; ties go to the smaller t.
PrecisionSchedule greedy_topk(const GainProfile& gains, int k);

/// Selected steps whose gain is <= 0.
int nonpositive_selected(const GainProfile& gains, const PrecisionSchedule& z);

std::uint64_t binomial(int n, int k);

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

struct BruteForceResult {
  PrecisionSchedule schedule;
  double error = 0.0;
  std::uint64_t evaluated = 0;
};

/// Exhaustive argmin of `error` over all schedules with exactly K ones. Ties
/// go to the lexicographically smallest bit string.
BruteForceResult brute_force_optimal(const std::function<double(const PrecisionSchedule&)>& error,
                                     int steps, int k,
                                     std::uint64_t cap = kDefaultEnumerationCap);

BruteForceResult brute_force_optimal(const Measurer& measurer, int k,
                                     std::uint64_t cap = kDefaultEnumerationCap);

// ---------------------------------------------------------------------------
// Diagnostics

struct LipschitzReport {
  int k = 0;
  double lipschitz = 0.0;         // max adjacent slope between measured points
  double epsilon = 0.0;           // max (L / 2) * (t_R - t_L) over unmeasured segments
  std::optional<double> gap_k;    // K-th minus (K+1)-th largest measured gain
  bool certified = false;         // 2 epsilon < gap_k
};

LipschitzReport lipschitz_report(const GainProfile& gains, int k);

/// Number of K-subsets whose reference score is strictly better than that of
/// `estimate`; 0 means the estimate is optimal under the reference gains.
std::uint64_t rank_deviation(const PrecisionSchedule& estimate, const GainProfile& reference,
                             int k, std::uint64_t cap = kDefaultEnumerationCap);

struct RankDeviationCurve {
  std::vector<int> ks;
  /// deviation[i][j]: after i post-anchor measurements, for ks[j].
  std::vector<std::vector<std::uint64_t>> deviation;

  /// First iteration from which the deviation for ks[j] stays 0, if any.
  std::optional<int> converged_at(std::size_t j) const;
  /// First iteration at which the deviation for ks[j] is 0, if any.
  std::optional<int> first_zero(std::size_t j) const;
};

RankDeviationCurve rank_deviation_curve(const BisectionState& state, const GainProfile& reference,
                                        const std::vector<int>& ks);

// ---------------------------------------------------------------------------
// Mix of models: z_t = 1 runs the large model, z_t = 0 the small one.

/// Small model on the K_small least sensitive steps (ties: smaller t).
PrecisionSchedule mix_models_schedule(const GainProfile& sensitivity, int small_steps);

/// Baseline placing the small model on the last K_small denoising steps (t = 1..K_small).
PrecisionSchedule end_placement_schedule(int steps, int small_steps);

}  // namespace stepprec
