#pragma once

#include "powerobs/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace powerobs::sim {

using model::Matrix;
using model::Vector;

struct ParameterSet {
  model::NetworkParams network;
  model::MachineParams machines;
};

enum class FilterKind { FirstRowLags, DiagonalLags };

struct FilterConfig {
  FilterKind kind = FilterKind::FirstRowLags;
  std::vector<double> poles;  // n - 1 poles
};

enum class OutputMap { Measured, Identity };

struct ObserverConfig {
  bool drem = false;
  bool ftc = false;
  bool kalman = false;
  bool speed = false;

  Vector pebo_xi0;
  FilterConfig filter;

  Vector drem_gamma;
  Vector drem_theta0;

  double ftc_gamma = 1.0;
  double ftc_mu = 0.1;
  Vector ftc_theta0;

  Vector speed_gain;
  Vector speed_xi0;

  Matrix kalman_noise;
  Matrix kalman_riccati0;
  Vector kalman_estimate0;
  double kalman_divergence_bound = 1e8;

  bool any_enabled() const { return drem || ftc || kalman || speed; }
  bool regression_needed() const { return drem || ftc; }
};

struct Scenario {
  std::string name;
  ParameterSet initial;
  std::optional<ParameterSet> after;
  std::optional<double> event_time;
  double t_end = 50.0;
  double dt = 1e-3;
  model::SystemState x0;
  ObserverConfig observers;
  double gramian_window = 10.0;
  OutputMap gramian_output = OutputMap::Measured;

  int machine_count() const { return initial.network.size(); }

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Parameters in force at time t; the event is right-continuous.
const ParameterSet& apply_event(const Scenario& s, double t);

/// Defaults for an n-machine scenario with every observer configured but
/// none enabled.
ObserverConfig default_observers(int n);

}  // namespace powerobs::sim
