#pragma once

#include "powerobs/diagnostics.hpp"
#include "powerobs/scenario.hpp"

#include <optional>
#include <vector>

namespace powerobs::sim {

/// Uniformly sampled record of a run. Per-observer columns are empty when
/// the observer is disabled.
struct TrajectoryLog {
  int machines = 0;
  double sample_period = 0.0;
  ObserverConfig observers;

  std::vector<double> time;
  std::vector<model::SystemState> plant;

  std::vector<Vector> pebo_xi;
  std::vector<Matrix> pebo_transition;

  std::vector<Vector> drem_estimate;
  std::vector<Vector> drem_theta;
  std::vector<Vector> ftc_estimate;
  std::vector<Vector> ftc_theta;
  std::vector<double> ftc_w;
  std::vector<Vector> kalman_estimate;
  std::vector<Matrix> kalman_riccati;
  std::vector<Vector> speed_estimate;

  std::vector<double> determinant;        // Delta
  std::vector<double> excitation;         // running integral of Delta^2 (integrated state)

  std::vector<double> err_drem;
  std::vector<double> err_ftc;
  std::vector<double> err_kalman;
  std::vector<double> err_speed;

  std::optional<observers::GramianBounds> gramian;
  double gramian_window = 0.0;

  std::size_t size() const { return time.size(); }
};

/// Integrates plant and observers from 0 to t_end with one synchronized RK4
/// step per dt and records every `decimate`-th step (plus the final one).
TrajectoryLog run_scenario(const Scenario& scenario, int decimate = 1);

}  // namespace powerobs::sim
