#pragma once

#include "powerobs/config.hpp"
#include "powerobs/diagnostics.hpp"
#include "powerobs/simulator.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace powerobs::cli {

inline constexpr double kSettlingThreshold = 1e-3;
inline constexpr double kKalmanConvergenceThreshold = 1e-2;
inline constexpr double kUcoRatioThreshold = 1e-8;

struct SimulationSummary {
  double t_end = 0.0;
  std::optional<double> final_err_drem;
  std::optional<double> final_err_ftc;
  std::optional<double> final_err_kalman;
  std::optional<double> final_err_speed;
  std::optional<bool> kalman_converged;

  // excitation, present when a DREM-type estimator ran
  bool excitation_evaluated = false;
  double excitation_integral = 0.0;
  double excitation_threshold = 0.0;
  std::optional<double> t_c;
  double tail_increment = 0.0;
  bool still_growing = false;

  std::optional<observers::GramianBounds> gramian;
  double gramian_window = 0.0;
};

/// The crossing time uses the finite-time estimator's gain and margin when
/// it ran, otherwise the first DREM gain with the configured margin.
SimulationSummary summarize(const sim::TrajectoryLog& log);

void print_summary(std::ostream& out, const SimulationSummary& summary);

struct GramianReport {
  double window = 0.0;
  observers::GramianBounds bounds;
  bool uco_evidence = false;  // ratio above kUcoRatioThreshold
};

GramianReport gramian_report(sim::Scenario scenario, double window);

struct SweepRow {
  double value = 0.0;
  std::optional<double> settle_drem;
  std::optional<double> settle_ftc;
  std::optional<double> settle_kalman;
  std::optional<double> settle_speed;
  std::vector<std::optional<double>> speed_slope;  // fitted d log|omega_err_i| / dt
};

/// Settling time of every error column and the speed-error decay slopes.
SweepRow sweep_row(const sim::TrajectoryLog& log, double value);

/// Applies `param` = value to a copy of `scenario` for each value and runs
/// them on worker threads. Output order follows `values`.
std::vector<sim::TrajectoryLog> run_sweep(const sim::Scenario& scenario,
                                          const std::string& param,
                                          const std::vector<double>& values, int decimate);

void write_sweep_csv(std::ostream& out, const std::string& param, const std::vector<SweepRow>& rows,
                     int machines);

/// Entry point of the command-line tool. Errors are reported on `err` as a
/// single `error: <Kind>: <message>` line; the return value is the exit
/// status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace powerobs::cli
