#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "stepprec/denoiser.hpp"
#include "stepprec/gain_profile.hpp"
#include "stepprec/noise_schedule.hpp"
#include "stepprec/precision_schedule.hpp"
#include "stepprec/trajectory.hpp"

namespace stepprec {

/// Prefix products of the deviation recursion delta_{t-1} = A_t delta_t + B_t eps_t,
/// with A_t = (sqrt(alpha_{t-1}) / sqrt(alpha_t)) I + B_t J_t.
///
/// prefix(t) = A_1 A_2 ... A_{t-1} (identity for t = 1). Built once in O(T d^3),
/// after which every contribution is a single matrix-vector product.
/// Only the affine part of the denoiser enters; the nonlinearity is ignored.
template <typename Scalar>
class PropagationCache {
 public:
  using Vector = Vec<Scalar>;
  using Matrix = Mat<Scalar>;

  PropagationCache(const SyntheticDenoiser<Scalar>& model, const NoiseSchedule& schedule) {
    if (model.steps() != schedule.steps())
      throw ShapeError("denoiser and noise schedule disagree on T");
    const int steps = schedule.steps();
    const auto d = model.dim();
    prefix_.reserve(static_cast<std::size_t>(steps));
    b_.reserve(static_cast<std::size_t>(steps));
    Matrix running = Matrix::Identity(d, d);
    for (int t = 1; t <= steps; ++t) {
      const auto c = schedule.coefficients(t);
      prefix_.push_back(running);
      b_.push_back(static_cast<Scalar>(c.b));
      contributions_.push_back(running * (b_.back() * model.quant_error(t)));
      const Matrix a_t = static_cast<Scalar>(c.a_scalar) * Matrix::Identity(d, d) +
                         static_cast<Scalar>(c.b) * model.jacobian(t);
      running = running * a_t;
    }
  }

  int steps() const { return static_cast<int>(prefix_.size()); }
  int dim() const { return static_cast<int>(prefix_.front().rows()); }

  const Matrix& prefix(int t) const { return prefix_.at(index(t)); }
  Scalar b(int t) const { return b_.at(index(t)); }

  /// (prod_{j<t} A_j) B_t eps_t for the model's own errors.
  const Vector& contribution(int t) const { return contributions_.at(index(t)); }

  /// Same propagation applied to an arbitrary injected error vector.
  Vector propagate(int t, const Vector& injected) const {
    return prefix(t) * (b(t) * injected);
  }

  /// sum_t contribution(t) * (1 - z_t).
  Vector gated_sum(const PrecisionSchedule& z) const {
    if (z.steps() != steps()) throw ShapeError("schedule length does not match T");
    Vector sum = Vector::Zero(dim());
    for (int t = 1; t <= steps(); ++t)
      if (!z.full(t)) sum += contributions_[index(t)];
    return sum;
  }

 private:
  std::size_t index(int t) const {
    if (t < 1 || t > steps())
      throw IndexError("timestep " + std::to_string(t) + " outside [1, " +
                       std::to_string(steps()) + "]");
    return static_cast<std::size_t>(t - 1);
  }

  std::vector<Matrix> prefix_;
  std::vector<Scalar> b_;
  std::vector<Vector> contributions_;
};

/// Final deviation when every step is quantized (delta_T = 0).
template <typename Scalar>
Vec<Scalar> closed_form_delta0(const SyntheticDenoiser<Scalar>& model,
                               const NoiseSchedule& schedule) {
  const PropagationCache<Scalar> cache(model, schedule);
  return cache.gated_sum(PrecisionSchedule::all_quantized(schedule.steps()));
}

/// Additive prediction of the final deviation under schedule z.
template <typename Scalar>
Vec<Scalar> ansatz_delta0(const SyntheticDenoiser<Scalar>& model, const NoiseSchedule& schedule,
                          const PrecisionSchedule& z) {
  return PropagationCache<Scalar>(model, schedule).gated_sum(z);
}

/// Contribution of quantizing step t alone.
template <typename Scalar>
Vec<Scalar> per_step_contribution(const SyntheticDenoiser<Scalar>& model,
                                  const NoiseSchedule& schedule, int t) {
  if (t < 1 || t > schedule.steps())
    throw IndexError("timestep " + std::to_string(t) + " outside [1, T]");
  return PropagationCache<Scalar>(model, schedule).contribution(t);
}

/// E(Z) over a calibration set: per-sample L2 deviation of x_0 from the
/// full-precision reference, aggregated by the mean.
struct DeviationReport {
  std::string schedule_bits;
  Eigen::VectorXd delta0;  // mean over samples of x_0^(Z) - x_0^(1)
  std::vector<double> per_sample_errors;
  double mean_error = 0.0;
  double variance = 0.0;  // population variance of per_sample_errors
};

/// Runs schedules against a fixed calibration set. The full-precision
/// reference x_0^(1) is computed once per sample at construction.
template <typename Scalar>
class ErrorMeasurer {
 public:
  using Vector = Vec<Scalar>;

  ErrorMeasurer(SyntheticDenoiser<Scalar> model, NoiseSchedule schedule,
                std::vector<Vector> samples)
      : model_(std::move(model)), schedule_(std::move(schedule)), samples_(std::move(samples)) {
    if (samples_.empty()) throw ParameterError("calibration set is empty");
    if (model_.steps() != schedule_.steps())
      throw ShapeError("denoiser and noise schedule disagree on T");
    for (const auto& x : samples_)
      if (x.size() != model_.dim()) throw ShapeError("calibration sample dimension mismatch");
    const auto ones = PrecisionSchedule::all_full(steps());
    reference_.reserve(samples_.size());
    for (const auto& x : samples_) reference_.push_back(final_state(x, ones, model_, schedule_));
    e_zero_ = error(PrecisionSchedule::all_quantized(steps()));
  }

  int steps() const { return schedule_.steps(); }
  const SyntheticDenoiser<Scalar>& model() const { return model_; }
  const NoiseSchedule& schedule() const { return schedule_; }
  const std::vector<Vector>& samples() const { return samples_; }
  std::size_t sample_count() const { return samples_.size(); }

  DeviationReport measure(const PrecisionSchedule& z) const {
    DeviationReport r;
    r.schedule_bits = z.to_string();
    r.delta0 = Eigen::VectorXd::Zero(model_.dim());
    r.per_sample_errors.reserve(samples_.size());
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const Vector diff = final_state(samples_[i], z, model_, schedule_) - reference_[i];
      r.delta0 += diff.template cast<double>();
      r.per_sample_errors.push_back(static_cast<double>(diff.norm()));
    }
    const double n = static_cast<double>(samples_.size());
    r.delta0 /= n;
    double sum = 0.0;
    for (double e : r.per_sample_errors) sum += e;
    r.mean_error = sum / n;
    double ss = 0.0;
    for (double e : r.per_sample_errors) ss += (e - r.mean_error) * (e - r.mean_error);
    r.variance = ss / n;
    return r;
  }

  double error(const PrecisionSchedule& z) const { return measure(z).mean_error; }

  /// E(0) - E(e_t).
  double upcast_gain(int t) const {
    check(t);
    return all_quantized_error() - error(PrecisionSchedule::one_hot(steps(), t));
  }

  /// E(1 - e_t) - E(1).
  double downcast_loss(int t) const {
    check(t);
    return error(PrecisionSchedule::all_but(steps(), t)) -
           error(PrecisionSchedule::all_full(steps()));
  }

  double single_toggle(GainKind kind, int t) const {
    return kind == GainKind::upcast ? upcast_gain(t) : downcast_loss(t);
  }

  GainProfile measure_profile(GainKind kind) const {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(steps()));
    for (int t = 1; t <= steps(); ++t) values.push_back(single_toggle(kind, t));
    return fully_measured(kind, std::move(values));
  }

  double all_quantized_error() const { return e_zero_; }

 private:
  void check(int t) const {
    if (t < 1 || t > steps())
      throw IndexError("timestep " + std::to_string(t) + " outside [1, " +
                       std::to_string(steps()) + "]");
  }

  SyntheticDenoiser<Scalar> model_;
  NoiseSchedule schedule_;
  std::vector<Vector> samples_;
  std::vector<Vector> reference_;
  double e_zero_ = 0.0;
};

template <typename Scalar>
DeviationReport measure_E(const PrecisionSchedule& z, const SyntheticDenoiser<Scalar>& model,
                          const NoiseSchedule& schedule, const std::vector<Vec<Scalar>>& samples) {
  return ErrorMeasurer<Scalar>(model, schedule, samples).measure(z);
}

template <typename Scalar>
double upcast_gain(int t, const ErrorMeasurer<Scalar>& measurer) {
  return measurer.upcast_gain(t);
}

template <typename Scalar>
double downcast_loss(int t, const ErrorMeasurer<Scalar>& measurer) {
  return measurer.downcast_loss(t);
}

using Measurer = ErrorMeasurer<double>;

}  // namespace stepprec
