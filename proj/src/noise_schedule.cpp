#include "stepprec/noise_schedule.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "stepprec/errors.hpp"

namespace stepprec {

AlphaKind parse_alpha_kind(std::string_view name) {
  if (name == "linear_alpha" || name == "linear") return AlphaKind::linear_alpha;
  if (name == "cosine") return AlphaKind::cosine;
  throw ParameterError("unknown alpha kind '" + std::string(name) +
                       "' (expected linear_alpha or cosine)");
}

std::string_view to_string(AlphaKind kind) {
  switch (kind) {
    case AlphaKind::linear_alpha:
      return "linear_alpha";
    case AlphaKind::cosine:
      return "cosine";
  }
  return "?";
}

StepCoefficients ddim_coefficients(double alpha_prev, double alpha_t) {
  if (!(alpha_prev > 0.0 && alpha_prev <= 1.0 && alpha_t > 0.0 && alpha_t <= 1.0))
    throw ParameterError("alpha values must lie in (0, 1]");
  // written via the ratio so that equal alphas give b = 0 exactly
  const double ratio = std::sqrt(alpha_prev / alpha_t);
  return {ratio, std::sqrt(1.0 - alpha_prev) - ratio * std::sqrt(1.0 - alpha_t)};
}

NoiseSchedule::NoiseSchedule(std::vector<double> alphas_by_t) : alphas_(std::move(alphas_by_t)) {
  if (alphas_.size() < 2) throw ParameterError("noise schedule needs at least one step");
  for (std::size_t t = 0; t < alphas_.size(); ++t) {
    const double a = alphas_[t];
    if (!(a > 0.0 && a <= 1.0))
      throw ParameterError("alpha_" + std::to_string(t) + " = " + std::to_string(a) +
                           " outside (0, 1]");
    if (t > 0 && !(a < alphas_[t - 1]))
      throw ParameterError("alphas must strictly increase toward t = 0 (violated at t = " +
                           std::to_string(t) + ")");
  }
}

double NoiseSchedule::alpha(int t) const {
  if (t < 0 || t > steps())
    throw IndexError("alpha index " + std::to_string(t) + " outside [0, " +
                     std::to_string(steps()) + "]");
  return alphas_[static_cast<std::size_t>(t)];
}

StepCoefficients NoiseSchedule::coefficients(int t) const {
  if (t < 1 || t > steps())
    throw IndexError("timestep " + std::to_string(t) + " outside [1, " +
                     std::to_string(steps()) + "]");
  return ddim_coefficients(alphas_[static_cast<std::size_t>(t - 1)],
                           alphas_[static_cast<std::size_t>(t)]);
}

NoiseSchedule build_noise_schedule(AlphaKind kind, int steps, double alpha_min,
                                   double alpha_max) {
  if (steps < 2) throw ParameterError("T must be at least 2");
  if (!(alpha_min > 0.0 && alpha_min < alpha_max && alpha_max <= 1.0))
    throw ParameterError("need 0 < alpha_min < alpha_max <= 1");

  std::vector<double> alphas(static_cast<std::size_t>(steps) + 1);
  const double span = alpha_max - alpha_min;
  for (int t = 0; t <= steps; ++t) {
    const double u = static_cast<double>(t) / steps;
    double ramp = 0.0;  // 1 at t = 0, 0 at t = T
    switch (kind) {
      case AlphaKind::linear_alpha:
        ramp = 1.0 - u;
        break;
      case AlphaKind::cosine: {
        const double c = std::cos(0.5 * std::numbers::pi * u);
        ramp = c * c;
        break;
      }
    }
    alphas[static_cast<std::size_t>(t)] = alpha_min + span * ramp;
  }
  alphas.front() = alpha_max;
  alphas.back() = alpha_min;
  return NoiseSchedule(std::move(alphas));
}

}  // namespace stepprec
