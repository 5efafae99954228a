// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status if
// any criterion fails.

#include "powerobs/analysis.hpp"
#include "powerobs/commands.hpp"
#include "powerobs/config.hpp"
#include "powerobs/diagnostics.hpp"
#include "powerobs/drem.hpp"
#include "powerobs/errors.hpp"
#include "powerobs/integrator.hpp"
#include "powerobs/model.hpp"
#include "powerobs/simulator.hpp"

#include "../test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

namespace {

using namespace powerobs;
using model::Matrix;
using model::Vector;

const std::string kScenario = std::string(POWEROBS_SCENARIO_DIR) + "/two_machine_load_change.json";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

sim::Scenario load_change(bool drem, bool ftc, bool kalman, bool speed) {
  sim::Scenario s = cli::load_config(kScenario).scenario;
  s.observers.drem = drem;
  s.observers.ftc = ftc;
  s.observers.kalman = kalman;
  s.observers.speed = speed;
  return s;
}

// Largest |E_hat_i - E_i| over samples with t >= from.
double worst_component_error(const sim::TrajectoryLog& log, const std::vector<Vector>& estimate,
                             double from) {
  double worst = 0.0;
  for (std::size_t k = 0; k < log.size(); ++k) {
    if (log.time[k] >= from) {
      worst = std::max(worst, (estimate[k] - log.plant[k].voltage).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

Outcome annihilator_identity() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int n : {2, 3, 5}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const model::NetworkParams net = powerobs::testing::random_network(rng, n);
      const model::MachineParams mp = powerobs::testing::random_machines(rng, n);
      const model::SystemState s = powerobs::testing::random_state(rng, n);
      const Matrix C = model::voltage_annihilator(model::measure(s, mp, net), net);
      worst = std::max(worst, (C * s.voltage).norm() / std::max(1.0, s.voltage.norm()));
    }
  }
  return {worst <= 1e-10, "max |C E| / max(1, |E|) = " + fmt(worst)};
}

Outcome pebo_identity() {
  sim::Scenario s = load_change(true, false, false, false);
  s.t_end = 20.0;
  const sim::TrajectoryLog log = sim::run_scenario(s, 1);
  const Vector theta = s.observers.pebo_xi0 - s.x0.voltage;
  double worst = 0.0;
  for (std::size_t k = 0; k < log.size(); ++k) {
    const Vector r = log.pebo_xi[k] - log.plant[k].voltage - log.pebo_transition[k] * theta;
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-6, "max residual over [0, 20] s = " + fmt(worst)};
}

Outcome drem_algebra() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  double worst = 0.0;
  int singular = 0;
  for (int n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 400; ++trial) {
      Matrix m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = dist(rng);
      if (n > 1 && trial % 4 == 0) {
        m.col(n - 1) = 0.3 * m.col(0) - 2.0 * m.col(n - 2);
        ++singular;
      }
      if (trial % 4 == 1) {
        m.setZero();
        ++singular;
      }
      const double det = m.determinant();
      const Matrix adj = observers::adjugate(m);
      const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
      const double rel = (adj * m - det * Matrix::Identity(n, n)).norm() / std::pow(scale, n);
      worst = std::max(worst, rel);
    }
  }
  return {worst <= 1e-10,
          "max relative residual = " + fmt(worst) + " (" + std::to_string(singular) + " singular)"};
}

Outcome asymptotic_convergence() {
  const sim::Scenario s = load_change(true, false, false, false);
  const sim::TrajectoryLog log = sim::run_scenario(s, 1);
  const double worst = worst_component_error(log, log.drem_estimate, 40.0);
  const auto report = observers::excitation_monitor(log.determinant, log.sample_period,
                                                    s.observers.drem_gamma[0], s.observers.ftc_mu);
  // The integral is strictly increasing over the tail iff Delta never vanishes there.
  const std::size_t tail_start = log.size() - log.size() / 5;
  bool nonzero = true;
  for (std::size_t k = tail_start; k < log.size(); ++k) nonzero = nonzero && log.determinant[k] != 0.0;
  const bool pass = worst <= 1e-3 && report.still_growing && nonzero;
  return {pass, "max |E~_i| for t >= 40 s = " + fmt(worst) + ", tail increment of int Delta^2 = " +
                    fmt(report.tail_increment) + (nonzero ? ", Delta nonzero on tail" : ", Delta hits 0")};
}

std::optional<double> settle(const sim::TrajectoryLog& log, const std::vector<double>& err) {
  return sim::settling_time(log.time, err, cli::kSettlingThreshold);
}

std::string opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string("none"); }

Outcome gain_monotonicity() {
  sim::Scenario s = load_change(true, false, false, false);
  s.observers.drem_gamma = Vector::Constant(2, 1.0);
  const sim::TrajectoryLog slow = sim::run_scenario(s, 1);
  s.observers.drem_gamma = Vector::Constant(2, 10.0);
  const sim::TrajectoryLog fast = sim::run_scenario(s, 1);
  const auto t1 = settle(slow, slow.err_drem);
  const auto t10 = settle(fast, fast.err_drem);
  const bool pass = t1 && t10 && *t10 < *t1;
  std::ostringstream d;
  d.precision(10);
  d << "settling gamma=1: " << (t1 ? std::to_string(*t1) : "none")
    << " s, gamma=10: " << (t10 ? std::to_string(*t10) : "none") << " s";
  if (t1 && t10) d << ", margin " << fmt(*t1 - *t10) << " s";
  return {pass, d.str()};
}

Outcome ftc_exactness() {
  const sim::Scenario s = load_change(true, true, false, false);
  const sim::TrajectoryLog log = sim::run_scenario(s, 1);
  sim::Scenario slow_s = load_change(true, false, false, false);
  slow_s.observers.drem_gamma = Vector::Constant(2, 1.0);
  const sim::TrajectoryLog slow = sim::run_scenario(slow_s, 1);

  const auto report = observers::excitation_monitor(log.determinant, log.sample_period,
                                                    s.observers.ftc_gamma, s.observers.ftc_mu);
  if (!report.crossing_time) return {false, "no crossing of the excitation threshold"};
  const double t_c = *report.crossing_time;
  const double worst = worst_component_error(log, log.ftc_estimate, t_c + 0.5);
  const auto t_ftc = settle(log, log.err_ftc);
  const auto t_drem10 = settle(log, log.err_drem);
  const auto t_drem1 = settle(slow, slow.err_drem);
  const bool faster = t_ftc && t_drem10 && t_drem1 && *t_ftc < *t_drem10 && *t_ftc < *t_drem1;
  return {worst <= 1e-4 && faster,
          "t_c = " + fmt(t_c) + " s, max |E~_i| after t_c + 0.5 = " + fmt(worst) +
              ", settling ftc " + opt(t_ftc) + " s vs drem gamma=10 " + opt(t_drem10) +
              " s, gamma=1 " + opt(t_drem1) + " s"};
}

// Slope of log|omega~_i| over samples in [from, to) above the round-off floor.
std::optional<double> speed_slope(const sim::TrajectoryLog& log, int i, double from, double to,
                                  double floor) {
  std::vector<double> t, e;
  for (std::size_t k = 0; k < log.size(); ++k) {
    if (log.time[k] >= from && log.time[k] < to) {
      t.push_back(log.time[k]);
      e.push_back(log.speed_estimate[k][i] - log.plant[k].speed[i]);
    }
  }
  return sim::fit_log_slope(t, e, floor, std::numeric_limits<double>::infinity());
}

Outcome speed_rate() {
  bool pass = true;
  std::ostringstream d;
  double worst_rel = 0.0, worst_twin = 0.0;
  for (double k : {1.0, 5.0, 25.0}) {
    sim::Scenario s = load_change(false, false, false, true);
    s.t_end = 20.0;
    s.observers.speed_gain = Vector::Constant(2, k);
    const sim::TrajectoryLog log = sim::run_scenario(s, 1);
    sim::Scenario twin = s;
    twin.after.reset();
    twin.event_time.reset();
    const sim::TrajectoryLog ref = sim::run_scenario(twin, 1);
    for (int i = 0; i < 2; ++i) {
      const double expected = -(s.initial.machines.damping[i] + k);
      const double peak = std::abs(log.speed_estimate[0][i] - log.plant[0].speed[i]);
      std::vector<double> e;
      for (std::size_t j = 0; j < log.size(); ++j) {
        e.push_back(log.speed_estimate[j][i] - log.plant[j].speed[i]);
      }
      const auto slope = sim::fit_log_slope(log.time, e, 1e-8 * peak, 1e-1 * peak);
      if (!slope) {
        pass = false;
        continue;
      }
      worst_rel = std::max(worst_rel, std::abs(*slope / expected - 1.0));
      // Error trajectories with and without the load change.
      for (std::size_t j = 0; j < log.size(); ++j) {
        const double a = log.speed_estimate[j][i] - log.plant[j].speed[i];
        const double b = ref.speed_estimate[j][i] - ref.plant[j].speed[i];
        worst_twin = std::max(worst_twin, std::abs(a - b) / peak);
      }
      if (k == 1.0) {
        // Direct fit on either side of the event, where the error is still resolvable.
        const auto before = speed_slope(log, i, 8.0, 10.0, 1e-11);
        const auto after = speed_slope(log, i, 10.0, 12.0, 1e-11);
        if (!before || !after) {
          pass = false;
          continue;
        }
        const double rb = std::abs(*before / expected - 1.0);
        const double ra = std::abs(*after / expected - 1.0);
        pass = pass && rb <= 0.01 && ra <= 0.01;
        d << "k=1 machine " << i + 1 << " slope before/after event " << fmt(*before) << "/"
          << fmt(*after) << " (expected " << fmt(expected) << "); ";
      }
    }
  }
  pass = pass && worst_rel <= 0.01 && worst_twin <= 1e-9;
  d << "max relative slope error " << fmt(worst_rel)
    << ", max error difference vs no-event run " << fmt(worst_twin);
  return {pass, d.str()};
}

Outcome non_uco() {
  const sim::Scenario s = load_change(false, false, true, false);
  const cli::GramianReport g = cli::gramian_report(s, 10.0);
  const sim::TrajectoryLog log = sim::run_scenario(s, 100);
  const double final_err = log.err_kalman.back();
  const bool pass = g.bounds.ratio() <= 1e-8 && final_err > 0.01;
  return {pass, "gramian min/max = " + fmt(g.bounds.min_eig) + "/" + fmt(g.bounds.max_eig) +
                    " ratio " + fmt(g.bounds.ratio()) + " (need <= 1e-08); kalman final error " +
                    fmt(final_err) + " (need > 0.01)"};
}

Outcome integrator_order() {
  const auto rhs = [](double, const Vector& x) { return x; };
  std::vector<double> log_dt, log_err;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    Vector x = Vector::Ones(1);
    const int steps = static_cast<int>(std::lround(1.0 / dt));
    for (int k = 0; k < steps; ++k) x = sim::rk4_step(rhs, x, k * dt, dt);
    log_dt.push_back(std::log(dt));
    log_err.push_back(std::log(std::abs(x[0] - std::exp(1.0))));
  }
  const double mean_x = (log_dt[0] + log_dt[1] + log_dt[2]) / 3.0;
  const double mean_y = (log_err[0] + log_err[1] + log_err[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (log_dt[i] - mean_x) * (log_err[i] - mean_y);
    sxx += (log_dt[i] - mean_x) * (log_dt[i] - mean_x);
  }
  const double slope = sxy / sxx;
  return {std::abs(slope - 4.0) <= 0.4, "fitted order " + fmt(slope)};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "powerobs_acceptance";
  std::filesystem::create_directories(dir);
  const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  std::ostringstream out, err;
  const int ra = cli::run_cli({"simulate", "--config", kScenario, "--out", a}, out, err);
  const int rb = cli::run_cli({"simulate", "--config", kScenario, "--out", b}, out, err);
  const std::string ca = slurp(a), cb = slurp(b);
  std::filesystem::remove_all(dir);
  if (ra != 0 || rb != 0) return {false, "simulate failed: " + err.str()};
  return {!ca.empty() && ca == cb, std::to_string(ca.size()) + " bytes, " +
                                       (ca == cb ? "identical" : "different")};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "voltage annihilator identity", 1.0, annihilator_identity},
      {2, "PEBO reconstruction identity", 5.0, pebo_identity},
      {3, "adjugate mixing algebra", 1.0, drem_algebra},
      {4, "asymptotic voltage convergence", 10.0, asymptotic_convergence},
      {5, "gain monotonicity of settling time", 20.0, gain_monotonicity},
      {6, "finite-time convergence", 10.0, ftc_exactness},
      {7, "speed observer decay rate", 10.0, speed_rate},
      {8, "non-UCO diagnostic", 10.0, non_uco},
      {9, "integrator order", 1.0, integrator_order},
      {10, "CSV determinism", 20.0, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s %2d %s: %s; runtime %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str(), elapsed, c.budget_s, in_time ? "" : " EXCEEDED");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
