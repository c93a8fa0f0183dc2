#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace stepprec {

enum class AlphaKind { linear_alpha, cosine };

AlphaKind parse_alpha_kind(std::string_view name);
std::string_view to_string(AlphaKind kind);

/// Per-step DDIM coefficients: x_{t-1} = a * x_t + b * mu(x_t, t).
struct StepCoefficients {
  double a_scalar;
  double b;
};

/// Coefficients from the neighbouring cumulative alphas (alpha_{t-1}, alpha_t).
StepCoefficients ddim_coefficients(double alpha_prev, double alpha_t);

/// Cumulative signal levels alpha_T..alpha_0 of a deterministic sampler.
///
/// Indexed by reverse step: alpha(t) is the value used at step t and
/// alpha(0) is the terminal value needed by the t = 1 update. alpha(T) is
/// the smallest (most noise) and the sequence strictly increases toward 0.
class NoiseSchedule {
 public:
  /// `alphas_by_t[t]` holds alpha_t for t = 0..T.
  explicit NoiseSchedule(std::vector<double> alphas_by_t);

  int steps() const { return static_cast<int>(alphas_.size()) - 1; }
  double alpha(int t) const;
  std::span<const double> alphas() const { return alphas_; }

  StepCoefficients coefficients(int t) const;

 private:
  std::vector<double> alphas_;
};

NoiseSchedule build_noise_schedule(AlphaKind kind, int steps, double alpha_min,
                                   double alpha_max);

/// Same as `NoiseSchedule::coefficients`, kept as a free function.
inline StepCoefficients step_coefficients(const NoiseSchedule& schedule, int t) {
  return schedule.coefficients(t);
}

}  // namespace stepprec
