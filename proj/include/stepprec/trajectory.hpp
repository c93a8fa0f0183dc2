#pragma once

#include <ostream>
#include <vector>

#include "stepprec/denoiser.hpp"
#include "stepprec/noise_schedule.hpp"
#include "stepprec/precision_schedule.hpp"

namespace stepprec {

enum class Precision { full, quantized };

/// States x_T, x_{T-1}, ..., x_0 of one reverse pass.
template <typename Scalar>
struct LatentTrajectory {
  std::vector<Vec<Scalar>> states;

  int steps() const { return static_cast<int>(states.size()) - 1; }
  /// x_t for t in [0, T].
  const Vec<Scalar>& at(int t) const {
    return states.at(static_cast<std::size_t>(steps() - t));
  }
  const Vec<Scalar>& final_state() const { return states.back(); }
};

/// One deterministic DDIM update with precomputed coefficients.
template <typename Scalar>
Vec<Scalar> ddim_step(const Vec<Scalar>& x, int t, const StepCoefficients& c,
                      const SyntheticDenoiser<Scalar>& model, Precision precision) {
  if (x.size() != model.dim()) throw ShapeError("latent dimension mismatch");
  const Vec<Scalar> mu =
      precision == Precision::full ? model.predict(x, t) : model.predict_quantized(x, t);
  return static_cast<Scalar>(c.a_scalar) * x + static_cast<Scalar>(c.b) * mu;
}

template <typename Scalar>
Vec<Scalar> ddim_step(const Vec<Scalar>& x, int t, const SyntheticDenoiser<Scalar>& model,
                      const NoiseSchedule& schedule, Precision precision) {
  return ddim_step(x, t, schedule.coefficients(t), model, precision);
}

namespace detail {

inline void check_lengths(int model_steps, const NoiseSchedule& schedule,
                          const PrecisionSchedule& z) {
  if (model_steps != schedule.steps())
    throw ShapeError("denoiser has " + std::to_string(model_steps) +
                     " timesteps but noise schedule has " + std::to_string(schedule.steps()));
  if (z.steps() != schedule.steps())
    throw ShapeError("precision schedule has " + std::to_string(z.steps()) +
                     " bits but T = " + std::to_string(schedule.steps()));
}

}  // namespace detail

/// x_0 under schedule z without keeping intermediate states.
template <typename Scalar>
Vec<Scalar> final_state(const Vec<Scalar>& x_init, const PrecisionSchedule& z,
                        const SyntheticDenoiser<Scalar>& model, const NoiseSchedule& schedule) {
  detail::check_lengths(model.steps(), schedule, z);
  Vec<Scalar> x = x_init;
  for (int t = schedule.steps(); t >= 1; --t)
    x = ddim_step(x, t, schedule.coefficients(t), model,
                  z.full(t) ? Precision::full : Precision::quantized);
  return x;
}

template <typename Scalar>
LatentTrajectory<Scalar> run_trajectory(const Vec<Scalar>& x_init, const PrecisionSchedule& z,
                                        const SyntheticDenoiser<Scalar>& model,
                                        const NoiseSchedule& schedule) {
  detail::check_lengths(model.steps(), schedule, z);
  if (x_init.size() != model.dim()) throw ShapeError("latent dimension mismatch");
  LatentTrajectory<Scalar> traj;
  traj.states.reserve(static_cast<std::size_t>(schedule.steps()) + 1);
  traj.states.push_back(x_init);
  for (int t = schedule.steps(); t >= 1; --t)
    traj.states.push_back(ddim_step(traj.states.back(), t, schedule.coefficients(t), model,
                                    z.full(t) ? Precision::full : Precision::quantized));
  return traj;
}

/// CSV with header `t,component,value`, one row per latent entry.
template <typename Scalar>
void write_trajectory_csv(std::ostream& os, const LatentTrajectory<Scalar>& traj) {
  const auto old = os.precision(17);
  os << "t,component,value\n";
  for (int t = traj.steps(); t >= 0; --t) {
    const auto& x = traj.at(t);
    for (Eigen::Index i = 0; i < x.size(); ++i) os << t << ',' << i << ',' << x[i] << '\n';
  }
  os.precision(old);
}

}  // namespace stepprec
