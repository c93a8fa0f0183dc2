#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "stepprec/denoiser.hpp"
#include "stepprec/noise_schedule.hpp"

namespace stepprec {

/// Per-timestep magnitude shape of the injected errors. "Front" refers to
/// denoising order, i.e. large t (the first steps executed).
enum class ErrorProfile { constant, front_loaded, back_loaded, spiky };

/// gaussian: eps_t is an isotropic Gaussian direction scaled by the profile.
/// orthogonal: eps_t is solved for so that the propagated contributions
/// (prod A_j) B_t eps_t are mutually orthogonal with norms set by the
/// profile. Requires d >= T.
/// coherent: eps_t is solved for so that the propagated contributions share
/// one direction u: c_t = m_t (rho u + sqrt(1 - rho^2) w_t) with w_t a random
/// unit vector orthogonal to u and rho the configured coherence.
enum class ErrorStructure { gaussian, orthogonal, coherent };

ErrorProfile parse_error_profile(std::string_view s);
std::string_view to_string(ErrorProfile p);
ErrorStructure parse_error_structure(std::string_view s);
std::string_view to_string(ErrorStructure s);

struct DenoiserSpec {
  int dim = 16;
  double spectral_radius = 0.9;  // target for the generated Jacobians
  double spectral_bound = 1.0;   // hard limit checked by the denoiser
  bool per_step_jacobians = false;
  double bias_scale = 0.1;
  double nonlinearity = 0.035;  // gamma
  ErrorProfile error_profile = ErrorProfile::front_loaded;
  ErrorStructure error_structure = ErrorStructure::coherent;
  double error_scale = 0.05;
  double error_coherence = 0.9;  // rho, coherent structure only

  friend bool operator==(const DenoiserSpec&, const DenoiserSpec&) = default;
};

/// Relative magnitude m_t for t = 1..T (index t - 1). Spiky draws its spike
/// positions from `rng`.
std::vector<double> error_magnitudes(ErrorProfile profile, int steps, std::mt19937_64& rng);

/// Error vectors for an existing model (its errors are ignored). Used both
/// for quantization error and for small-model substitution error.
std::vector<Eigen::VectorXd> generate_errors(const Denoiser& model, const NoiseSchedule& schedule,
                                             ErrorProfile profile, ErrorStructure structure,
                                             double scale, double coherence, std::mt19937_64& rng);

/// Seeded model: Jacobians and projection from stream "model", errors from
/// stream "errors".
Denoiser make_denoiser(const DenoiserSpec& spec, const NoiseSchedule& schedule,
                       std::uint64_t seed);

/// Standard normal initial latents x_T from stream "samples".
std::vector<Eigen::VectorXd> make_samples(int dim, int count, std::uint64_t seed);

/// Largest ratio ||gamma tanh(P x_t)|| / ||J_t x_t + c_t|| seen along the
/// full-precision trajectories of `samples`.
double nonlinear_fraction(const Denoiser& model, const NoiseSchedule& schedule,
                          const std::vector<Eigen::VectorXd>& samples);

}  // namespace stepprec
