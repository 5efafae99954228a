#include "powerobs/scenario.hpp"

#include "powerobs/errors.hpp"

#include <cmath>
#include <string>

namespace powerobs::sim {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::Validation, message);
}

void require_vector(const Vector& v, int n, const std::string& path, bool positive = false) {
  require(v.size() == n, path + ": expected " + std::to_string(n) + " entries, got " +
                             std::to_string(v.size()));
  for (int i = 0; i < n; ++i) {
    require(std::isfinite(v[i]), path + "[" + std::to_string(i) + "] is not finite");
    if (positive) {
      require(v[i] > 0.0, path + "[" + std::to_string(i) + "] must be positive");
    }
  }
}

void require_spd(const Matrix& m, int n, const std::string& path) {
  require(m.rows() == n && m.cols() == n,
          path + ": expected " + std::to_string(n) + "x" + std::to_string(n));
  require(m.allFinite(), path + " is not finite");
  require((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12, path + " is not symmetric");
  const Eigen::LLT<Matrix> llt(m);
  require(llt.info() == Eigen::Success, path + " is not positive definite");
}

void validate_set(const ParameterSet& set, const std::string& path) {
  set.network.validate(path + ".network");
  set.machines.validate(set.network.size(), path + ".machines");
}

}  // namespace

void Scenario::validate() const {
  require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
  require(std::isfinite(t_end) && t_end > 0.0, "t_end must be positive");
  validate_set(initial, "initial");
  const int n = machine_count();
  if (after) {
    validate_set(*after, "after");
    require(after->network.size() == n, "after: machine count differs from initial");
  }
  if (event_time) {
    require(*event_time > 0.0 && *event_time < t_end, "event_time must lie in (0, t_end)");
  }
  require_vector(x0.rotor_angle, n, "initial_state.delta");
  require_vector(x0.speed, n, "initial_state.omega");
  require_vector(x0.voltage, n, "initial_state.E");
  require(std::isfinite(gramian_window) && gramian_window > 0.0,
          "diagnostics.gramian_window must be positive");

  const ObserverConfig& obs = observers;
  require_vector(obs.pebo_xi0, n, "observers.pebo.xi_E0");
  if (obs.regression_needed()) {
    require(static_cast<int>(obs.filter.poles.size()) == n - 1,
            "observers.filter.poles: expected " + std::to_string(n - 1) + " poles");
    for (std::size_t i = 0; i < obs.filter.poles.size(); ++i) {
      require(obs.filter.poles[i] > 0.0,
              "observers.filter.poles[" + std::to_string(i) + "] must be positive");
    }
  }
  if (obs.drem) {
    require_vector(obs.drem_gamma, n, "observers.drem.gamma", true);
    require_vector(obs.drem_theta0, n, "observers.drem.theta0");
  }
  if (obs.ftc) {
    require(std::isfinite(obs.ftc_gamma) && obs.ftc_gamma > 0.0,
            "observers.ftc.gamma must be positive");
    require(obs.ftc_mu > 0.0 && obs.ftc_mu < 1.0, "observers.ftc.mu must lie in (0, 1)");
    require_vector(obs.ftc_theta0, n, "observers.ftc.theta0");
  }
  if (obs.speed) {
    require_vector(obs.speed_gain, n, "observers.speed.k_omega", true);
    require_vector(obs.speed_xi0, n, "observers.speed.xi0");
  }
  if (obs.kalman) {
    require_spd(obs.kalman_noise, n, "observers.kalman.S");
    require_spd(obs.kalman_riccati0, n, "observers.kalman.H0");
    require_vector(obs.kalman_estimate0, n, "observers.kalman.E_hat0");
    require(obs.kalman_divergence_bound > 0.0, "observers.kalman.divergence_bound must be positive");
  }
}

const ParameterSet& apply_event(const Scenario& s, double t) {
  if (s.after && s.event_time && t >= *s.event_time) return *s.after;
  return s.initial;
}

ObserverConfig default_observers(int n) {
  ObserverConfig obs;
  obs.pebo_xi0 = Vector::Zero(n);
  obs.filter.kind = FilterKind::FirstRowLags;
  obs.filter.poles.assign(n - 1, 1.0);
  obs.drem_gamma = Vector::Constant(n, 10.0);
  obs.drem_theta0 = Vector::Zero(n);
  obs.ftc_gamma = 1.0;
  obs.ftc_mu = 0.1;
  obs.ftc_theta0 = Vector::Zero(n);
  obs.speed_gain = Vector::Constant(n, 5.0);
  obs.speed_xi0 = Vector::Zero(n);
  obs.kalman_noise = Matrix::Identity(n, n);
  obs.kalman_riccati0 = Matrix::Identity(n, n);
  obs.kalman_estimate0 = Vector::Zero(n);
  return obs;
}

}  // namespace powerobs::sim
