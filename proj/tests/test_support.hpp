#pragma once

#include "powerobs/model.hpp"
#include "powerobs/scenario.hpp"

#include <random>

namespace powerobs::testing {

using model::Matrix;
using model::Vector;

inline Vector uniform(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

inline model::NetworkParams random_network(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> y(0.05, 0.5), angle(-0.3, 0.3);
  model::NetworkParams net;
  net.admittance = Matrix::Zero(n, n);
  net.admittance_angle = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      net.admittance(i, j) = net.admittance(j, i) = y(rng);
      net.admittance_angle(i, j) = net.admittance_angle(j, i) = angle(rng);
    }
  }
  net.shunt_conductance = uniform(rng, n, 0.05, 0.2);
  net.shunt_susceptance = uniform(rng, n, -0.6, -0.3);
  return net;
}

inline model::MachineParams random_machines(std::mt19937_64& rng, int n) {
  model::MachineParams mp;
  mp.voltage_decay = uniform(rng, n, 0.2, 0.4);
  mp.voltage_coupling = uniform(rng, n, 0.1, 0.3);
  mp.damping = uniform(rng, n, 0.2, 1.0);
  mp.mech_power = uniform(rng, n, 1.0, 5.0);
  mp.power_scale = Vector::Ones(n);
  mp.input = uniform(rng, n, 1.0, 1.5);
  return mp;
}

inline model::SystemState random_state(std::mt19937_64& rng, int n) {
  return {uniform(rng, n, -3.14, 3.14), uniform(rng, n, -2.0, 2.0), uniform(rng, n, 0.5, 8.0)};
}

/// Pre-event parameters of the shipped two-machine scenario.
inline sim::ParameterSet load_change_initial() {
  sim::ParameterSet p;
  p.network.admittance = (Matrix(2, 2) << 0.0, 0.1032, 0.1032, 0.0).finished();
  p.network.admittance_angle = Matrix::Zero(2, 2);
  p.network.shunt_conductance = Vector{{0.0966, 0.0926}};
  p.network.shunt_susceptance = Vector{{-0.4373, -0.4294}};
  p.machines.voltage_decay = Vector{{0.2614, 0.2532}};
  p.machines.voltage_coupling = Vector{{0.0223 / 0.1032, 0.0265 / 0.1032}};
  p.machines.damping = Vector{{1.0, 0.2}};
  p.machines.mech_power = Vector{{28.22, 28.22}};
  p.machines.power_scale = Vector::Ones(2);
  p.machines.input = Vector{{1.2405, 1.2405}};
  return p;
}

inline sim::ParameterSet load_change_after() {
  sim::ParameterSet p = load_change_initial();
  p.network.shunt_conductance = Vector{{0.1256, 0.1204}};
  p.network.shunt_susceptance = Vector{{-0.5685, -0.5582}};
  p.machines.voltage_decay = Vector{{0.2898, 0.2864}};
  p.machines.voltage_coupling = Vector{{0.02236 / 0.1032, 0.0265 / 0.1032}};
  return p;
}

inline sim::Scenario load_change_scenario() {
  sim::Scenario s;
  s.name = "load_change";
  s.initial = load_change_initial();
  s.after = load_change_after();
  s.event_time = 10.0;
  s.t_end = 50.0;
  s.dt = 1e-3;
  s.x0 = {Vector::Zero(2), Vector::Zero(2), Vector{{7.0, 6.0}}};
  s.observers = sim::default_observers(2);
  return s;
}

}  // namespace powerobs::testing
