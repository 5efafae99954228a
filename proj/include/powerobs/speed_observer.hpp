#pragma once

#include "powerobs/model.hpp"

namespace powerobs::observers {

struct SpeedObserverState {
  model::Vector xi;
  model::Vector gain;  // k_omega, positive
};

struct SpeedObserverOutput {
  model::Vector xi_rate;
  model::Vector speed_estimate;
};

/// omega_hat = xi + k delta; the speed error then decays at rate D + k
/// independently of the electrical power.
SpeedObserverOutput speed_obs_rhs(const SpeedObserverState& state,
                                  const model::Measurements& meas,
                                  const model::MachineParams& mp);

model::Vector speed_estimate(const SpeedObserverState& state, const model::Vector& rotor_angle);

}  // namespace powerobs::observers
