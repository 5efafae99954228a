#include "powerobs/speed_observer.hpp"

namespace powerobs::observers {

model::Vector speed_estimate(const SpeedObserverState& state, const model::Vector& rotor_angle) {
  return state.xi + state.gain.cwiseProduct(rotor_angle);
}

SpeedObserverOutput speed_obs_rhs(const SpeedObserverState& state,
                                  const model::Measurements& meas,
                                  const model::MachineParams& mp) {
  const model::Vector omega_hat = speed_estimate(state, meas.rotor_angle);
  model::Vector rate = -mp.damping.cwiseProduct(omega_hat) + mp.mech_power -
                       mp.power_scale.cwiseProduct(meas.active_power) -
                       state.gain.cwiseProduct(omega_hat);
  return {std::move(rate), omega_hat};
}

}  // namespace powerobs::observers
