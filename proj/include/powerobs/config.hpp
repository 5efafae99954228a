#pragma once

#include "powerobs/scenario.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace powerobs::cli {

struct RunConfig {
  std::string scenario_path;
  std::string output_path;
  std::vector<std::string> observers;  // subset of {drem, ftc, kalman, speed}
  std::optional<double> gamma;         // DREM adaptation gain, all machines
  std::optional<double> k_omega;
  std::optional<double> mu;
  std::optional<double> k;             // filter pole(s)
  std::optional<double> dt;
  std::optional<double> t_end;
  int decimate = 1;
};

struct ParsedConfig {
  sim::Scenario scenario;
  RunConfig run;
};

/// Parses a `schema: 1` JSON scenario document. Throws ParseError on bad
/// syntax and ValidationError (with the field path) on invariant breaches.
ParsedConfig parse_config(std::string_view text);

ParsedConfig load_config(const std::string& path);

/// Comma separated observer names; throws ValidationError on unknown names.
std::vector<std::string> parse_observer_list(std::string_view text);

/// Applies overrides and observer selection from `run` and re-validates.
void apply_run_config(sim::Scenario& scenario, const RunConfig& run);

}  // namespace powerobs::cli
