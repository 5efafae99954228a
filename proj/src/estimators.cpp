#include "powerobs/estimators.hpp"

#include "powerobs/errors.hpp"

#include <algorithm>

namespace powerobs::observers {

DremEstimatorState::DremEstimatorState(EstimatorMode mode, Vector gamma, double mu,
                                       Vector theta_hat0)
    : theta_hat(theta_hat0),
      mode_(mode),
      gamma_(std::move(gamma)),
      mu_(mu),
      theta_hat0_(std::move(theta_hat0)) {
  if (gamma_.size() != theta_hat0_.size()) {
    throw Error(ErrorKind::Validation, "estimator: gamma and theta0 sizes differ");
  }
  for (Eigen::Index i = 0; i < gamma_.size(); ++i) {
    if (!(gamma_[i] > 0.0)) {
      throw Error(ErrorKind::Validation,
                  "estimator.gamma[" + std::to_string(i) + "] must be positive");
    }
  }
}

DremEstimatorState DremEstimatorState::asymptotic(Vector gamma, Vector theta_hat0) {
  return DremEstimatorState(EstimatorMode::Asymptotic, std::move(gamma), 0.0,
                            std::move(theta_hat0));
}

DremEstimatorState DremEstimatorState::finite_time(Vector gamma, double mu, Vector theta_hat0) {
  if (gamma.size() > 0 && (gamma.array() != gamma[0]).any()) {
    throw Error(ErrorKind::Validation, "ftc.gamma: finite-time mode requires equal gains");
  }
  if (!(mu > 0.0 && mu < 1.0)) {
    throw Error(ErrorKind::Validation, "ftc.mu must lie in (0, 1)");
  }
  return DremEstimatorState(EstimatorMode::FiniteTime, std::move(gamma), mu,
                            std::move(theta_hat0));
}

Vector gradient_rhs(const DremEstimatorState& est, const MixedRegression& mixed) {
  const double delta = mixed.determinant;
  return -(est.gamma().array() * delta * (delta * est.theta_hat - mixed.script_y).array())
              .matrix();
}

double ftc_rhs(const DremEstimatorState& est, double determinant) {
  return -est.gamma()[0] * determinant * determinant * est.w;
}

Vector ftc_reconstruct(const DremEstimatorState& est) {
  const double clipped = std::min(est.w, 1.0 - est.mu());
  return (est.theta_hat - clipped * est.theta_hat0()) / (1.0 - clipped);
}

Vector parameter_estimate(const DremEstimatorState& est) {
  return est.mode() == EstimatorMode::FiniteTime ? ftc_reconstruct(est) : est.theta_hat;
}

}  // namespace powerobs::observers
