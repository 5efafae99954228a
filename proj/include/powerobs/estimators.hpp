#pragma once

#include "powerobs/drem.hpp"

namespace powerobs::observers {

enum class EstimatorMode { Asymptotic, FiniteTime };

/// Gradient estimator on the scalar regressions script_y_i = Delta theta_i.
/// In finite-time mode it also carries w, with w(0) = 1, and reconstructs
/// theta from the theta_hat snapshot taken at construction.
class DremEstimatorState {
 public:
  static DremEstimatorState asymptotic(Vector gamma, Vector theta_hat0);
  /// Rejects non-uniform gains; mu must lie in (0, 1).
  static DremEstimatorState finite_time(Vector gamma, double mu, Vector theta_hat0);

  EstimatorMode mode() const { return mode_; }
  const Vector& gamma() const { return gamma_; }
  double mu() const { return mu_; }
  const Vector& theta_hat0() const { return theta_hat0_; }

  Vector theta_hat;
  double w = 1.0;

 private:
  DremEstimatorState(EstimatorMode mode, Vector gamma, double mu, Vector theta_hat0);

  EstimatorMode mode_;
  Vector gamma_;
  double mu_;
  Vector theta_hat0_;
};

/// d theta_hat_i / dt = -gamma_i Delta (Delta theta_hat_i - script_y_i)
Vector gradient_rhs(const DremEstimatorState& est, const MixedRegression& mixed);

/// dw/dt = -gamma Delta^2 w
double ftc_rhs(const DremEstimatorState& est, double determinant);

/// (theta_hat - w_c theta_hat(0)) / (1 - w_c) with w_c = min(w, 1 - mu).
Vector ftc_reconstruct(const DremEstimatorState& est);

/// Estimate of theta the observer should use: theta_hat in asymptotic mode,
/// the clipped reconstruction in finite-time mode.
Vector parameter_estimate(const DremEstimatorState& est);

}  // namespace powerobs::observers
