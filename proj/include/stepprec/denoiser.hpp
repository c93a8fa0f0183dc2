#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <limits>
#include <string>
#include <vector>

#include "stepprec/errors.hpp"

namespace stepprec {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Largest eigenvalue modulus of a square matrix.
template <typename Derived>
double spectral_radius(const Eigen::MatrixBase<Derived>& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m.template cast<double>(), false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// Linearised noise predictor with an optional bounded nonlinearity and
/// per-timestep additive quantization error.
///
///   mu(x, t)     = J_t x + c_t + gamma * tanh(P x)
///   mu_hat(x, t) = mu(x, t) + eps_t
///
/// With gamma = 0 the predictor is exactly affine and J_t is its Jacobian.
/// Either one Jacobian is shared across all steps or one is given per step.
template <typename Scalar>
class SyntheticDenoiser {
 public:
  using Vector = Vec<Scalar>;
  using Matrix = Mat<Scalar>;

  SyntheticDenoiser(std::vector<Matrix> jacobians, std::vector<Vector> biases,
                    std::vector<Vector> quant_errors, Scalar nonlinearity_scale,
                    Matrix projection, double spectral_bound = 1.0)
      : jacobians_(std::move(jacobians)),
        biases_(std::move(biases)),
        errors_(std::move(quant_errors)),
        gamma_(nonlinearity_scale),
        projection_(std::move(projection)) {
    if (biases_.empty()) throw ParameterError("denoiser needs at least one timestep");
    const auto d = biases_.front().size();
    if (d < 1) throw ParameterError("latent dimension must be positive");
    if (jacobians_.size() != 1 && jacobians_.size() != biases_.size())
      throw ShapeError("expected one shared Jacobian or one per timestep");
    if (errors_.size() != biases_.size())
      throw ShapeError("expected one quantization error vector per timestep");
    if (!(gamma_ >= Scalar(0))) throw ParameterError("nonlinearity scale must be >= 0");
    for (const auto& j : jacobians_) {
      if (j.rows() != d || j.cols() != d) throw ShapeError("Jacobian must be d x d");
      if (spectral_radius(j) > spectral_bound * (1.0 + 1e-12))
        throw ParameterError("Jacobian spectral radius exceeds bound " +
                             std::to_string(spectral_bound));
    }
    for (const auto& v : biases_)
      if (v.size() != d) throw ShapeError("bias must have dimension d");
    for (const auto& v : errors_)
      if (v.size() != d) throw ShapeError("quantization error must have dimension d");
    if (projection_.rows() != d || projection_.cols() != d)
      throw ShapeError("nonlinearity projection must be d x d");
  }

  int dim() const { return static_cast<int>(biases_.front().size()); }
  int steps() const { return static_cast<int>(biases_.size()); }
  bool shared_jacobian() const { return jacobians_.size() == 1; }
  Scalar nonlinearity_scale() const { return gamma_; }
  const Matrix& projection() const { return projection_; }

  const Matrix& jacobian(int t) const {
    check(t);
    return shared_jacobian() ? jacobians_.front() : jacobians_[idx(t)];
  }
  const Vector& bias(int t) const {
    check(t);
    return biases_[idx(t)];
  }
  const Vector& quant_error(int t) const {
    check(t);
    return errors_[idx(t)];
  }
  const std::vector<Vector>& quant_errors() const { return errors_; }

  /// gamma * tanh(P x); zero vector when gamma = 0.
  Vector nonlinear_term(const Vector& x) const {
    if (gamma_ == Scalar(0)) return Vector::Zero(x.size());
    return gamma_ * (projection_ * x).array().tanh().matrix();
  }

  /// Full-precision prediction mu(x, t).
  Vector predict(const Vector& x, int t) const {
    if (x.size() != dim()) throw ShapeError("latent dimension mismatch");
    Vector mu = jacobian(t) * x + biases_[idx(t)];
    if (gamma_ != Scalar(0)) mu += nonlinear_term(x);
    return mu;
  }

  /// Quantized prediction mu(x, t) + eps_t.
  Vector predict_quantized(const Vector& x, int t) const {
    Vector mu = predict(x, t);
    mu += errors_[idx(t)];
    return mu;
  }

  /// Same predictor with a different per-step error set, e.g. the
  /// substitution error of a smaller model.
  SyntheticDenoiser with_errors(std::vector<Vector> errors) const {
    return SyntheticDenoiser(jacobians_, biases_, std::move(errors), gamma_, projection_,
                             std::numeric_limits<double>::infinity());
  }

  SyntheticDenoiser with_nonlinearity(Scalar gamma) const {
    return SyntheticDenoiser(jacobians_, biases_, errors_, gamma,
                             projection_, std::numeric_limits<double>::infinity());
  }

  template <typename Other>
  SyntheticDenoiser<Other> cast() const {
    std::vector<Mat<Other>> js;
    std::vector<Vec<Other>> bs, es;
    for (const auto& j : jacobians_) js.push_back(j.template cast<Other>());
    for (const auto& b : biases_) bs.push_back(b.template cast<Other>());
    for (const auto& e : errors_) es.push_back(e.template cast<Other>());
    return SyntheticDenoiser<Other>(std::move(js), std::move(bs), std::move(es),
                                    static_cast<Other>(gamma_),
                                    projection_.template cast<Other>(),
                                    std::numeric_limits<double>::infinity());
  }

 private:
  void check(int t) const {
    if (t < 1 || t > steps())
      throw IndexError("timestep " + std::to_string(t) + " outside [1, " +
                       std::to_string(steps()) + "]");
  }
  static std::size_t idx(int t) { return static_cast<std::size_t>(t - 1); }

  std::vector<Matrix> jacobians_;
  std::vector<Vector> biases_;
  std::vector<Vector> errors_;
  Scalar gamma_;
  Matrix projection_;
};

using Denoiser = SyntheticDenoiser<double>;

}  // namespace stepprec
