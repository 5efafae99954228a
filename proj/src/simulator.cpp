#include "powerobs/simulator.hpp"

#include "powerobs/drem.hpp"
#include "powerobs/errors.hpp"
#include "powerobs/estimators.hpp"
#include "powerobs/integrator.hpp"
#include "powerobs/kalman_bucy.hpp"
#include "powerobs/pebo.hpp"
#include "powerobs/speed_observer.hpp"

#include <cmath>

namespace powerobs::sim {

namespace {

using observers::DremEstimatorState;
using observers::FilterBank;
using observers::PeboState;

FilterBank make_filter(int n, const FilterConfig& cfg) {
  return cfg.kind == FilterKind::FirstRowLags ? FilterBank::first_row_lags(n, cfg.poles)
                                              : FilterBank::diagonal_lags(n, cfg.poles);
}

// Offsets of every sub-state inside the flat augmented state vector. Matrices
// are stored column-major.
struct Layout {
  int n = 0;
  int plant = 0, xi = 0, transition = 0;
  int filter = -1, filter_size = 0;
  int drem = -1;
  int ftc = -1, ftc_w = -1;
  int excitation = -1;
  int speed = -1;
  int kalman = -1, riccati = -1;
  int total = 0;

  Layout(int machines, const ObserverConfig& obs, int filter_states) : n(machines) {
    int at = 0;
    plant = at, at += 3 * n;
    xi = at, at += n;
    transition = at, at += n * n;
    if (obs.regression_needed()) {
      filter = at, filter_size = filter_states, at += filter_states;
      excitation = at, at += 1;
    }
    if (obs.drem) drem = at, at += n;
    if (obs.ftc) ftc = at, at += n, ftc_w = at, at += 1;
    if (obs.speed) speed = at, at += n;
    if (obs.kalman) kalman = at, at += n, riccati = at, at += n * n;
    total = at;
  }
};

class Augmented {
 public:
  explicit Augmented(const Scenario& s)
      : scenario_(s),
        n_(s.machine_count()),
        filter_(s.observers.regression_needed()
                    ? make_filter(n_, s.observers.filter)
                    : FilterBank(n_, std::vector<observers::FilterRow>(n_))),
        layout_(n_, s.observers, s.observers.regression_needed() ? filter_.state_size() : 0),
        drem_(DremEstimatorState::asymptotic(Vector::Ones(n_), Vector::Zero(n_))),
        ftc_(DremEstimatorState::finite_time(Vector::Ones(n_), 0.5, Vector::Zero(n_))) {
    const ObserverConfig& obs = s.observers;
    if (obs.drem) drem_ = DremEstimatorState::asymptotic(obs.drem_gamma, obs.drem_theta0);
    if (obs.ftc) {
      ftc_ = DremEstimatorState::finite_time(Vector::Constant(n_, obs.ftc_gamma), obs.ftc_mu,
                                             obs.ftc_theta0);
    }
  }

  const Layout& layout() const { return layout_; }

  Vector initial_state() const {
    const ObserverConfig& obs = scenario_.observers;
    Vector x = Vector::Zero(layout_.total);
    x.segment(layout_.plant, n_) = scenario_.x0.rotor_angle;
    x.segment(layout_.plant + n_, n_) = scenario_.x0.speed;
    x.segment(layout_.plant + 2 * n_, n_) = scenario_.x0.voltage;
    x.segment(layout_.xi, n_) = obs.pebo_xi0;
    matrix(x, layout_.transition) = Matrix::Identity(n_, n_);
    if (obs.drem) x.segment(layout_.drem, n_) = obs.drem_theta0;
    if (obs.ftc) {
      x.segment(layout_.ftc, n_) = obs.ftc_theta0;
      x[layout_.ftc_w] = 1.0;
    }
    if (obs.speed) x.segment(layout_.speed, n_) = obs.speed_xi0;
    if (obs.kalman) {
      x.segment(layout_.kalman, n_) = obs.kalman_estimate0;
      matrix(x, layout_.riccati) = obs.kalman_riccati0;
    }
    return x;
  }

  model::SystemState plant(const Vector& x) const {
    return {x.segment(layout_.plant, n_), x.segment(layout_.plant + n_, n_),
            x.segment(layout_.plant + 2 * n_, n_)};
  }

  PeboState pebo(const Vector& x) const {
    return {x.segment(layout_.xi, n_), matrix(x, layout_.transition)};
  }

  observers::MixedRegression mixed(const Vector& x, const model::Measurements& meas,
                                   const model::NetworkParams& net) const {
    const Matrix C = model::voltage_annihilator(meas, net);
    const observers::Regression raw = observers::regression(C, pebo(x));
    const observers::Regression filtered =
        filter_.output(x.segment(layout_.filter, layout_.filter_size), raw);
    return observers::drem_mix(filtered.y, filtered.psi);
  }

  DremEstimatorState drem(const Vector& x) const {
    DremEstimatorState est = drem_;
    est.theta_hat = x.segment(layout_.drem, n_);
    return est;
  }

  DremEstimatorState ftc(const Vector& x) const {
    DremEstimatorState est = ftc_;
    est.theta_hat = x.segment(layout_.ftc, n_);
    est.w = x[layout_.ftc_w];
    return est;
  }

  observers::SpeedObserverState speed(const Vector& x) const {
    return {x.segment(layout_.speed, n_), scenario_.observers.speed_gain};
  }

  observers::KalmanState kalman(const Vector& x) const {
    const ObserverConfig& obs = scenario_.observers;
    return {x.segment(layout_.kalman, n_), matrix(x, layout_.riccati), obs.kalman_noise,
            obs.kalman_divergence_bound};
  }

  Vector derivative(const Vector& x, const ParameterSet& params) const {
    const ObserverConfig& obs = scenario_.observers;
    const model::NetworkParams& net = params.network;
    const model::MachineParams& mp = params.machines;
    Vector rate(layout_.total);

    const model::SystemState state = plant(x);
    const model::SystemState plant_rate = model::plant_rhs(state, mp, net);
    rate.segment(layout_.plant, n_) = plant_rate.rotor_angle;
    rate.segment(layout_.plant + n_, n_) = plant_rate.speed;
    rate.segment(layout_.plant + 2 * n_, n_) = plant_rate.voltage;

    const model::Measurements meas = model::measure(state, mp, net);
    const Matrix A = model::voltage_dynamics_matrix(meas.rotor_angle, mp, net);
    const PeboState ext = pebo(x);
    const PeboState ext_rate = observers::pebo_rhs(ext, A, meas.input);
    rate.segment(layout_.xi, n_) = ext_rate.xi;
    matrix(rate, layout_.transition) = ext_rate.transition;

    Matrix C;
    if (obs.regression_needed() || obs.kalman) C = model::voltage_annihilator(meas, net);

    if (obs.regression_needed()) {
      const observers::Regression raw = observers::regression(C, ext);
      const Vector fstate = x.segment(layout_.filter, layout_.filter_size);
      rate.segment(layout_.filter, layout_.filter_size) = filter_.rhs(fstate, raw);
      const observers::Regression filtered = filter_.output(fstate, raw);
      const observers::MixedRegression mixed = observers::drem_mix(filtered.y, filtered.psi);
      rate[layout_.excitation] = mixed.determinant * mixed.determinant;
      if (obs.drem) rate.segment(layout_.drem, n_) = observers::gradient_rhs(drem(x), mixed);
      if (obs.ftc) {
        const DremEstimatorState est = ftc(x);
        rate.segment(layout_.ftc, n_) = observers::gradient_rhs(est, mixed);
        rate[layout_.ftc_w] = observers::ftc_rhs(est, mixed.determinant);
      }
    }
    if (obs.speed) {
      rate.segment(layout_.speed, n_) = observers::speed_obs_rhs(speed(x), meas, mp).xi_rate;
    }
    if (obs.kalman) {
      const observers::KalmanDerivative k = observers::kalman_rhs(kalman(x), A, C, meas.input);
      rate.segment(layout_.kalman, n_) = k.estimate_rate;
      matrix(rate, layout_.riccati) = k.riccati_rate;
    }
    return rate;
  }

  void post_step(Vector& x) const {
    if (scenario_.observers.kalman) {
      Matrix H = matrix(x, layout_.riccati);
      observers::symmetrize(H);
      matrix(x, layout_.riccati) = H;
    }
  }

  Eigen::Map<Matrix> matrix(Vector& x, int offset) const {
    return Eigen::Map<Matrix>(x.data() + offset, n_, n_);
  }
  Eigen::Map<const Matrix> matrix(const Vector& x, int offset) const {
    return Eigen::Map<const Matrix>(x.data() + offset, n_, n_);
  }

 private:
  const Scenario& scenario_;
  int n_;
  FilterBank filter_;
  Layout layout_;
  DremEstimatorState drem_;
  DremEstimatorState ftc_;
};

void record(TrajectoryLog& log, const Augmented& aug, const Scenario& s, const Vector& x,
            double t) {
  const ObserverConfig& obs = s.observers;
  const ParameterSet& params = apply_event(s, t);
  const model::SystemState state = aug.plant(x);
  const PeboState ext = aug.pebo(x);
  log.time.push_back(t);
  log.plant.push_back(state);
  log.pebo_xi.push_back(ext.xi);
  log.pebo_transition.push_back(ext.transition);

  const model::Measurements meas = model::measure(state, params.machines, params.network);
  if (obs.regression_needed()) {
    log.determinant.push_back(aug.mixed(x, meas, params.network).determinant);
    log.excitation.push_back(x[aug.layout().excitation]);
  }
  if (obs.drem) {
    const Vector theta = aug.drem(x).theta_hat;
    const Vector estimate = observers::voltage_estimate(ext, theta);
    log.drem_theta.push_back(theta);
    log.drem_estimate.push_back(estimate);
    log.err_drem.push_back((estimate - state.voltage).norm());
  }
  if (obs.ftc) {
    const DremEstimatorState est = aug.ftc(x);
    const Vector estimate = observers::voltage_estimate(ext, observers::ftc_reconstruct(est));
    log.ftc_theta.push_back(est.theta_hat);
    log.ftc_w.push_back(est.w);
    log.ftc_estimate.push_back(estimate);
    log.err_ftc.push_back((estimate - state.voltage).norm());
  }
  if (obs.kalman) {
    const observers::KalmanState k = aug.kalman(x);
    log.kalman_estimate.push_back(k.estimate);
    log.kalman_riccati.push_back(k.riccati);
    log.err_kalman.push_back((k.estimate - state.voltage).norm());
  }
  if (obs.speed) {
    const Vector estimate = observers::speed_estimate(aug.speed(x), state.rotor_angle);
    log.speed_estimate.push_back(estimate);
    log.err_speed.push_back((estimate - state.speed).norm());
  }
}

}  // namespace

TrajectoryLog run_scenario(const Scenario& scenario, int decimate) {
  scenario.validate();
  if (decimate < 1) throw Error(ErrorKind::Validation, "decimate must be at least 1");

  const Augmented aug(scenario);
  const int n = scenario.machine_count();
  const double dt = scenario.dt;
  const long steps = std::max<long>(1, std::lround(std::ceil(scenario.t_end / dt - 1e-9)));
  const double window = std::min(scenario.gramian_window, scenario.t_end);
  const long window_samples = std::lround(window / dt);

  TrajectoryLog log;
  log.machines = n;
  log.sample_period = dt * decimate;
  log.observers = scenario.observers;
  log.gramian_window = window;

  observers::GramianAccumulator gramian(n, dt);
  Vector x = aug.initial_state();
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (k % decimate == 0 || k == steps) record(log, aug, scenario, x, t);
    if (k == steps) break;

    const ParameterSet& params = apply_event(scenario, t);
    if (k < window_samples) {
      const Matrix transition = aug.matrix(x, aug.layout().transition);
      if (scenario.gramian_output == OutputMap::Identity) {
        gramian.add(transition, Matrix::Identity(n, n));
      } else {
        const model::Measurements meas =
            model::measure(aug.plant(x), params.machines, params.network);
        gramian.add(transition, model::voltage_annihilator(meas, params.network));
      }
    }
    x = rk4_step([&](double, const Vector& state) { return aug.derivative(state, params); }, x,
                 t, dt);
    aug.post_step(x);
  }
  if (gramian.samples() >= 2) log.gramian = gramian.result();
  return log;
}

}  // namespace powerobs::sim
