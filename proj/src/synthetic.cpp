#include "stepprec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stepprec/error_model.hpp"
#include "stepprec/random.hpp"
#include "stepprec/trajectory.hpp"

namespace stepprec {

ErrorProfile parse_error_profile(std::string_view s) {
  if (s == "constant") return ErrorProfile::constant;
  if (s == "front_loaded") return ErrorProfile::front_loaded;
  if (s == "back_loaded") return ErrorProfile::back_loaded;
  if (s == "spiky") return ErrorProfile::spiky;
  throw ParameterError("unknown error profile '" + std::string(s) +
                       "' (expected constant, front_loaded, back_loaded or spiky)");
}

std::string_view to_string(ErrorProfile p) {
  switch (p) {
    case ErrorProfile::constant:
      return "constant";
    case ErrorProfile::front_loaded:
      return "front_loaded";
    case ErrorProfile::back_loaded:
      return "back_loaded";
    case ErrorProfile::spiky:
      return "spiky";
  }
  return "?";
}

ErrorStructure parse_error_structure(std::string_view s) {
  if (s == "gaussian") return ErrorStructure::gaussian;
  if (s == "orthogonal") return ErrorStructure::orthogonal;
  if (s == "coherent") return ErrorStructure::coherent;
  throw ParameterError("unknown error structure '" + std::string(s) +
                       "' (expected gaussian, orthogonal or coherent)");
}

std::string_view to_string(ErrorStructure s) {
  switch (s) {
    case ErrorStructure::gaussian:
      return "gaussian";
    case ErrorStructure::orthogonal:
      return "orthogonal";
    case ErrorStructure::coherent:
      return "coherent";
  }
  return "?";
}

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

Eigen::MatrixXd scaled_jacobian(int dim, double radius, std::mt19937_64& rng) {
  Eigen::MatrixXd g = gaussian_matrix(dim, dim, rng);
  const double rho = spectral_radius(g);
  return rho > 0.0 ? Eigen::MatrixXd(g * (radius / rho)) : Eigen::MatrixXd(g);
}

}  // namespace

std::vector<double> error_magnitudes(ErrorProfile profile, int steps, std::mt19937_64& rng) {
  std::vector<double> m(static_cast<std::size_t>(steps));
  for (int t = 1; t <= steps; ++t) {
    // u = 0 at the last denoising step (t = 1), 1 at the first (t = T)
    const double u = steps > 1 ? static_cast<double>(t - 1) / (steps - 1) : 1.0;
    double v = 1.0;
    switch (profile) {
      case ErrorProfile::constant:
        v = 1.0;
        break;
      case ErrorProfile::front_loaded:
      case ErrorProfile::spiky:
        // gentle trend plus a smooth hump peaking early in denoising order
        v = 0.15 + 0.3 * u + std::exp(-std::pow((u - 0.8) / 0.2, 2));
        break;
      case ErrorProfile::back_loaded:
        v = 0.15 + 0.3 * (1.0 - u) + std::exp(-std::pow((u - 0.2) / 0.2, 2));
        break;
    }
    m[static_cast<std::size_t>(t - 1)] = v;
  }
  if (profile == ErrorProfile::spiky) {
    std::vector<int> order(static_cast<std::size_t>(steps));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int spikes = std::max(2, steps / 6);
    for (int i = 0; i < std::min(spikes, steps); ++i) m[static_cast<std::size_t>(order[i])] *= 3.0;
  }
  return m;
}

std::vector<Eigen::VectorXd> generate_errors(const Denoiser& model, const NoiseSchedule& schedule,
                                             ErrorProfile profile, ErrorStructure structure,
                                             double scale, double coherence, std::mt19937_64& rng) {
  const int steps = schedule.steps();
  const int dim = model.dim();
  const auto mags = error_magnitudes(profile, steps, rng);
  std::vector<Eigen::VectorXd> errors;
  errors.reserve(static_cast<std::size_t>(steps));

  if (structure == ErrorStructure::gaussian) {
    std::normal_distribution<double> normal;
    for (int t = 1; t <= steps; ++t) {
      Eigen::VectorXd e(dim);
      for (auto& v : e) v = normal(rng);
      errors.push_back(e * (scale * mags[static_cast<std::size_t>(t - 1)] / std::sqrt(dim)));
    }
    return errors;
  }

  // Both remaining structures prescribe the propagated contributions
  // directly and solve prefix(t) * B_t * eps_t = target for eps_t.
  std::vector<Eigen::VectorXd> targets;
  if (structure == ErrorStructure::orthogonal) {
    if (dim < steps)
      throw ParameterError("orthogonal error structure needs d >= T (d = " + std::to_string(dim) +
                           ", T = " + std::to_string(steps) + ")");
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(dim, dim, rng));
    const Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(dim, steps);
    for (int t = 1; t <= steps; ++t) targets.push_back(basis.col(t - 1));
  } else {
    if (!(coherence >= 0.0 && coherence <= 1.0))
      throw ParameterError("error coherence must lie in [0, 1]");
    Eigen::VectorXd u = gaussian_matrix(dim, 1, rng).col(0);
    u.normalize();
    const double spread = std::sqrt(1.0 - coherence * coherence);
    for (int t = 1; t <= steps; ++t) {
      Eigen::VectorXd w = gaussian_matrix(dim, 1, rng).col(0);
      w -= u.dot(w) * u;
      const double n = w.norm();
      if (n > 0.0) w /= n;
      targets.push_back(coherence * u + spread * w);
    }
  }
  const PropagationCache<double> cache(model, schedule);
  for (int t = 1; t <= steps; ++t) {
    const Eigen::VectorXd target =
        targets[static_cast<std::size_t>(t - 1)] * (scale * mags[static_cast<std::size_t>(t - 1)]);
    errors.push_back(cache.prefix(t).partialPivLu().solve(target) / cache.b(t));
  }
  return errors;
}

Denoiser make_denoiser(const DenoiserSpec& spec, const NoiseSchedule& schedule,
                       std::uint64_t seed) {
  if (spec.dim < 1) throw ParameterError("d must be positive");
  if (!(spec.spectral_radius >= 0.0 && spec.spectral_radius <= spec.spectral_bound))
    throw ParameterError("spectral_radius must lie in [0, spectral_bound]");
  if (!(spec.nonlinearity >= 0.0)) throw ParameterError("gamma must be >= 0");
  if (!(spec.error_scale >= 0.0)) throw ParameterError("error_scale must be >= 0");
  if (!(spec.error_coherence >= 0.0 && spec.error_coherence <= 1.0))
    throw ParameterError("error_coherence must lie in [0, 1]");

  const int steps = schedule.steps();
  auto model_rng = named_stream(seed, "model");
  std::vector<Eigen::MatrixXd> jacobians;
  const int n_jac = spec.per_step_jacobians ? steps : 1;
  for (int i = 0; i < n_jac; ++i)
    jacobians.push_back(scaled_jacobian(spec.dim, spec.spectral_radius, model_rng));
  std::vector<Eigen::VectorXd> biases;
  for (int t = 1; t <= steps; ++t)
    biases.push_back(gaussian_matrix(spec.dim, 1, model_rng).col(0) * spec.bias_scale);
  const Eigen::MatrixXd projection =
      gaussian_matrix(spec.dim, spec.dim, model_rng) / std::sqrt(spec.dim);

  std::vector<Eigen::VectorXd> zero(static_cast<std::size_t>(steps),
                                    Eigen::VectorXd::Zero(spec.dim));
  Denoiser base(std::move(jacobians), std::move(biases), std::move(zero), spec.nonlinearity,
                projection, spec.spectral_bound);
  auto error_rng = named_stream(seed, "errors");
  return base.with_errors(generate_errors(base, schedule, spec.error_profile,
                                          spec.error_structure, spec.error_scale,
                                          spec.error_coherence, error_rng));
}

std::vector<Eigen::VectorXd> make_samples(int dim, int count, std::uint64_t seed) {
  if (count < 1) throw ParameterError("need at least one calibration sample");
  auto rng = named_stream(seed, "samples");
  std::normal_distribution<double> normal;
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd x(dim);
    for (auto& v : x) v = normal(rng);
    out.push_back(std::move(x));
  }
  return out;
}

double nonlinear_fraction(const Denoiser& model, const NoiseSchedule& schedule,
                          const std::vector<Eigen::VectorXd>& samples) {
  double worst = 0.0;
  const auto ones = PrecisionSchedule::all_full(schedule.steps());
  for (const auto& x : samples) {
    const auto traj = run_trajectory(x, ones, model, schedule);
    for (int t = schedule.steps(); t >= 1; --t) {
      const auto& xt = traj.at(t);
      const double lin = (model.jacobian(t) * xt + model.bias(t)).norm();
      const double nl = model.nonlinear_term(xt).norm();
      if (lin > 0.0) worst = std::max(worst, nl / lin);
    }
  }
  return worst;
}

}  // namespace stepprec
