#include "powerobs/commands.hpp"

#include "powerobs/analysis.hpp"
#include "powerobs/csv.hpp"
#include "powerobs/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

namespace powerobs::cli {

namespace {

std::optional<double> last(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return v.back();
}

std::string optional_text(std::optional<double> v) {
  return v ? format_double(*v) : std::string("absent");
}

std::string single_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  body(out);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

void apply_parameter(sim::Scenario& s, const std::string& param, double value) {
  RunConfig run;
  if (param == "gamma") {
    run.gamma = value;
  } else if (param == "k_omega") {
    run.k_omega = value;
  } else if (param == "k") {
    run.k = value;
  } else if (param == "mu") {
    run.mu = value;
  } else {
    throw Error(ErrorKind::Validation,
                "sweep: parameter must be one of gamma, k_omega, k, mu; got '" + param + "'");
  }
  apply_run_config(s, run);
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end != item.c_str() + item.size()) {
      throw Error(ErrorKind::Validation, "sweep: malformed value '" + item + "'");
    }
    values.push_back(v);
  }
  return values;
}

std::string sweep_run_path(const std::string& out, const std::string& param, std::size_t index) {
  std::filesystem::path p(out);
  const std::string stem = p.stem().string();
  p.replace_filename(stem + "_" + param + "_" + std::to_string(index) + ".csv");
  return p.string();
}

}  // namespace

SimulationSummary summarize(const sim::TrajectoryLog& log) {
  SimulationSummary s;
  s.t_end = log.time.empty() ? 0.0 : log.time.back();
  s.final_err_drem = last(log.err_drem);
  s.final_err_ftc = last(log.err_ftc);
  s.final_err_kalman = last(log.err_kalman);
  s.final_err_speed = last(log.err_speed);
  if (s.final_err_kalman) s.kalman_converged = *s.final_err_kalman <= kKalmanConvergenceThreshold;
  const sim::ObserverConfig& obs = log.observers;
  if (obs.regression_needed() && log.size() >= 1) {
    const double gamma = obs.ftc ? obs.ftc_gamma : obs.drem_gamma[0];
    const observers::ExcitationReport rep =
        observers::excitation_monitor(log.determinant, log.sample_period, gamma, obs.ftc_mu);
    s.excitation_evaluated = true;
    s.excitation_integral = log.excitation.back();
    s.excitation_threshold = rep.threshold;
    s.t_c = rep.crossing_time;
    s.tail_increment = rep.tail_increment;
    s.still_growing = rep.still_growing;
  }
  s.gramian = log.gramian;
  s.gramian_window = log.gramian_window;
  return s;
}

void print_summary(std::ostream& out, const SimulationSummary& s) {
  out << "t_end " << format_double(s.t_end) << '\n';
  if (s.final_err_drem) out << "final_err_E_drem " << format_double(*s.final_err_drem) << '\n';
  if (s.final_err_ftc) out << "final_err_E_ftc " << format_double(*s.final_err_ftc) << '\n';
  if (s.final_err_kalman) {
    out << "final_err_E_kalman " << format_double(*s.final_err_kalman) << '\n';
    out << "kalman " << (*s.kalman_converged ? "converged" : "not converged") << " (threshold "
        << format_double(kKalmanConvergenceThreshold) << ")\n";
  }
  if (s.final_err_speed) out << "final_err_omega " << format_double(*s.final_err_speed) << '\n';
  if (s.excitation_evaluated) {
    out << "intDelta2 " << format_double(s.excitation_integral) << '\n';
    out << "excitation_threshold " << format_double(s.excitation_threshold) << '\n';
    out << "t_c " << optional_text(s.t_c) << '\n';
    out << "intDelta2_tail " << format_double(s.tail_increment) << " ("
        << (s.still_growing ? "still growing" : "flat") << ")\n";
  }
  if (s.gramian) {
    out << "gramian_window " << format_double(s.gramian_window) << '\n';
    out << "gramian_min_eig " << format_double(s.gramian->min_eig) << '\n';
    out << "gramian_max_eig " << format_double(s.gramian->max_eig) << '\n';
  }
}

GramianReport gramian_report(sim::Scenario s, double window) {
  if (!(window > 0.0)) throw Error(ErrorKind::Validation, "gramian: window must be positive");
  if (window > s.t_end) {
    throw Error(ErrorKind::Validation, "gramian: window " + format_double(window) +
                                           " exceeds t_end " + format_double(s.t_end));
  }
  s.t_end = window;
  s.gramian_window = window;
  // The window is half-open, so an event at or after its end never acts.
  if (s.event_time && *s.event_time >= window) {
    s.event_time.reset();
    s.after.reset();
  }
  s.observers.drem = s.observers.ftc = s.observers.kalman = s.observers.speed = false;
  const sim::TrajectoryLog log = sim::run_scenario(s, std::max<long>(1, std::lround(window / s.dt)));
  if (!log.gramian) {
    throw Error(ErrorKind::EmptyWindow, "gramian: window " + format_double(window) +
                                            " holds fewer than 2 samples at dt " +
                                            format_double(s.dt));
  }
  return {window, *log.gramian, log.gramian->ratio() > kUcoRatioThreshold};
}

SweepRow sweep_row(const sim::TrajectoryLog& log, double value) {
  SweepRow row;
  row.value = value;
  auto settle = [&log](const std::vector<double>& err) -> std::optional<double> {
    if (err.empty()) return std::nullopt;
    return sim::settling_time(log.time, err, kSettlingThreshold);
  };
  row.settle_drem = settle(log.err_drem);
  row.settle_ftc = settle(log.err_ftc);
  row.settle_kalman = settle(log.err_kalman);
  row.settle_speed = settle(log.err_speed);
  if (log.observers.speed) {
    for (int i = 0; i < log.machines; ++i) {
      std::vector<double> err(log.size());
      double peak = 0.0;
      for (std::size_t k = 0; k < log.size(); ++k) {
        err[k] = log.speed_estimate[k][i] - log.plant[k].speed[i];
        peak = std::max(peak, std::abs(err[k]));
      }
      row.speed_slope.push_back(peak > 0.0
                                    ? sim::fit_log_slope(log.time, err, 1e-8 * peak, 1e-1 * peak)
                                    : std::nullopt);
    }
  }
  return row;
}

std::vector<sim::TrajectoryLog> run_sweep(const sim::Scenario& scenario,
                                          const std::string& param,
                                          const std::vector<double>& values, int decimate) {
  if (values.empty()) throw Error(ErrorKind::Validation, "sweep: value list is empty");
  std::vector<sim::Scenario> runs;
  for (double v : values) {
    sim::Scenario s = scenario;
    apply_parameter(s, param, v);
    runs.push_back(std::move(s));
  }
  std::vector<std::future<sim::TrajectoryLog>> jobs;
  for (const sim::Scenario& s : runs) {
    jobs.push_back(std::async(std::launch::async,
                              [&s, decimate] { return sim::run_scenario(s, decimate); }));
  }
  std::vector<sim::TrajectoryLog> logs;
  for (auto& job : jobs) logs.push_back(job.get());
  return logs;
}

void write_sweep_csv(std::ostream& out, const std::string& param,
                     const std::vector<SweepRow>& rows, int machines) {
  auto cell = [](std::optional<double> v) { return v ? format_double(*v) : std::string(); };
  out << "param,value,settle_E_drem,settle_E_ftc,settle_E_kalman,settle_omega";
  for (int i = 1; i <= machines; ++i) out << ",slope_omega_" << i;
  out << '\n';
  for (const SweepRow& row : rows) {
    out << param << ',' << format_double(row.value) << ',' << cell(row.settle_drem) << ','
        << cell(row.settle_ftc) << ',' << cell(row.settle_kalman) << ','
        << cell(row.settle_speed);
    for (int i = 0; i < machines; ++i) {
      out << ',' << (row.speed_slope.empty() ? std::string() : cell(row.speed_slope[i]));
    }
    out << '\n';
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multimachine power system state observers", "powerobs"};
  app.require_subcommand(1);

  RunConfig run;
  std::string observer_list;
  double window = 0.0;
  std::string output_map;
  std::string param, values_text;

  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--observers", observer_list, "drem,ftc,kalman,speed");
    cmd->add_option("--dt", run.dt, "integration step (s)");
    cmd->add_option("--t-end", run.t_end, "simulation horizon (s)");
    cmd->add_option("--gamma", run.gamma, "DREM adaptation gain");
    cmd->add_option("--k-omega", run.k_omega, "speed observer gain");
    cmd->add_option("--mu", run.mu, "finite-time clipping margin");
    cmd->add_option("--k", run.k, "filter pole");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run a scenario and write the CSV log");
  simulate->add_option("--config", run.scenario_path)->required();
  simulate->add_option("--out", run.output_path)->required();
  simulate->add_option("--decimate", run.decimate, "log every m-th step");
  add_overrides(simulate);

  CLI::App* gramian = app.add_subcommand("gramian", "observability Gramian diagnostic");
  gramian->add_option("--config", run.scenario_path)->required();
  gramian->add_option("--window", window)->required();
  gramian->add_option("--output-map", output_map, "measured or identity");
  gramian->add_option("--dt", run.dt, "integration step (s)");

  CLI::App* sweep = app.add_subcommand("sweep", "one run per parameter value");
  sweep->add_option("--config", run.scenario_path)->required();
  sweep->add_option("--param", param)->required();
  sweep->add_option("--values", values_text)->required();
  sweep->add_option("--out", run.output_path)->required();
  sweep->add_option("--decimate", run.decimate, "log every m-th step");
  add_overrides(sweep);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: UsageError: " << single_line(e.what()) << '\n';
    return 2;
  }

  try {
    ParsedConfig parsed = load_config(run.scenario_path);
    sim::Scenario& scenario = parsed.scenario;
    if (!observer_list.empty() || simulate->count("--observers") || sweep->count("--observers")) {
      run.observers = parse_observer_list(observer_list);
    }
    if (!simulate->count("--decimate") && !sweep->count("--decimate")) {
      run.decimate = parsed.run.decimate;
    }

    if (*simulate) {
      apply_run_config(scenario, run);
      const sim::TrajectoryLog log = sim::run_scenario(scenario, run.decimate);
      write_file(run.output_path, [&log](std::ostream& f) { write_csv(f, log); });
      print_summary(out, summarize(log));
    } else if (*gramian) {
      if (run.dt) scenario.dt = *run.dt;
      if (output_map == "identity") {
        scenario.gramian_output = sim::OutputMap::Identity;
      } else if (output_map == "measured") {
        scenario.gramian_output = sim::OutputMap::Measured;
      } else if (!output_map.empty()) {
        throw Error(ErrorKind::Validation, "--output-map must be measured or identity");
      }
      scenario.validate();
      const GramianReport rep = gramian_report(scenario, window);
      out << "window " << format_double(rep.window) << '\n';
      out << "min_eig " << format_double(rep.bounds.min_eig) << '\n';
      out << "max_eig " << format_double(rep.bounds.max_eig) << '\n';
      out << "ratio " << format_double(rep.bounds.ratio()) << '\n';
      out << "verdict " << (rep.uco_evidence ? "UCO evidence" : "not UCO") << '\n';
    } else if (*sweep) {
      apply_run_config(scenario, run);
      const std::vector<double> values = parse_values(values_text);
      const std::vector<sim::TrajectoryLog> logs = run_sweep(scenario, param, values, run.decimate);
      std::vector<SweepRow> rows;
      for (std::size_t i = 0; i < logs.size(); ++i) {
        const std::string path = sweep_run_path(run.output_path, param, i);
        write_file(path, [&](std::ostream& f) { write_csv(f, logs[i]); });
        rows.push_back(sweep_row(logs[i], values[i]));
        out << param << "=" << format_double(values[i]) << " -> " << path << '\n';
      }
      write_file(run.output_path, [&](std::ostream& f) {
        write_sweep_csv(f, param, rows, scenario.machine_count());
      });
    }
  } catch (const Error& e) {
    err << "error: " << kind_name(e.kind()) << ": " << single_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: InternalError: " << single_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace powerobs::cli
