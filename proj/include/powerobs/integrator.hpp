#pragma once

#include "powerobs/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace powerobs::sim {

inline bool all_finite(double x) { return std::isfinite(x); }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& x) {
  return x.allFinite();
}

/// One classical fourth-order Runge-Kutta step of dx/dt = rhs(t, x).
/// Throws NonFiniteState if the new state has a non-finite component.
template <typename State, typename Rhs>
State rk4_step(const Rhs& rhs, const State& x, double t, double dt) {
  const State k1 = rhs(t, x);
  const State k2 = rhs(t + 0.5 * dt, State(x + (0.5 * dt) * k1));
  const State k3 = rhs(t + 0.5 * dt, State(x + (0.5 * dt) * k2));
  const State k4 = rhs(t + dt, State(x + dt * k3));
  State next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!all_finite(next)) {
    throw Error(ErrorKind::NonFiniteState,
                "state became non-finite in step starting at t = " + std::to_string(t));
  }
  return next;
}

}  // namespace powerobs::sim
