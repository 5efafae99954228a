#include "powerobs/config.hpp"

#include "powerobs/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace powerobs::cli {

namespace {

using json = nlohmann::json;
using model::Matrix;
using model::Vector;

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorKind::Validation, message);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) invalid(path + ": expected a number");
  return j.get<double>();
}

Vector vector(const json& j, const std::string& path, int n) {
  if (n >= 0 && j.is_number()) return Vector::Constant(n, j.get<double>());
  if (!j.is_array()) invalid(path + ": expected an array of numbers");
  if (n >= 0 && static_cast<int>(j.size()) != n) {
    invalid(path + ": expected " + std::to_string(n) + " entries, got " +
            std::to_string(j.size()));
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = number(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

Matrix matrix(const json& j, const std::string& path, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    invalid(path + ": expected " + std::to_string(n) + " rows");
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m.row(i) = vector(j[i], path + "[" + std::to_string(i) + "]", n).transpose();
  }
  return m;
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) invalid(path + "." + key + ": missing");
  return j.at(key);
}

model::NetworkParams parse_network(const json& j, const std::string& path, int n) {
  model::NetworkParams net;
  net.admittance = matrix(field(j, "Y", path), path + ".Y", n);
  net.admittance_angle =
      j.contains("alpha") ? matrix(j["alpha"], path + ".alpha", n) : Matrix::Zero(n, n);
  net.shunt_conductance = vector(field(j, "G_shunt", path), path + ".G_shunt", n);
  net.shunt_susceptance = vector(field(j, "B_shunt", path), path + ".B_shunt", n);
  return net;
}

model::MachineParams parse_raw(const json& j, const std::string& path, int n) {
  model::RawMachineConstants raw;
  raw.inertia = vector(field(j, "M", path), path + ".M", n);
  raw.mech_damping = vector(field(j, "D_m", path), path + ".D_m", n);
  raw.mech_power = vector(field(j, "P_m", path), path + ".P_m", n);
  raw.time_constant = vector(field(j, "tau", path), path + ".tau", n);
  raw.nominal_frequency = number(field(j, "omega_0", path), path + ".omega_0");
  raw.d_reactance = vector(field(j, "x_d", path), path + ".x_d", n);
  raw.d_transient = vector(field(j, "x_dp", path), path + ".x_dp", n);
  raw.shunt_susceptance = vector(field(j, "B_shunt", path), path + ".B_shunt", n);
  raw.field_voltage = j.contains("E_f") ? vector(j["E_f"], path + ".E_f", n) : Vector::Zero(n);
  raw.control_voltage = j.contains("nu") ? vector(j["nu"], path + ".nu", n) : Vector::Zero(n);
  return model::derive_params(raw).params;
}

model::MachineParams parse_machines(const json& j, const std::string& path, int n) {
  if (!j.is_object()) invalid(path + ": expected an object");
  const bool composite = j.contains("a") || j.contains("b") || j.contains("D") ||
                         j.contains("P") || j.contains("d");
  model::MachineParams mp;
  if (composite) {
    mp.voltage_decay = vector(field(j, "a", path), path + ".a", n);
    mp.voltage_coupling = vector(field(j, "b", path), path + ".b", n);
    mp.damping = vector(field(j, "D", path), path + ".D", n);
    mp.mech_power = vector(field(j, "P", path), path + ".P", n);
    mp.power_scale = j.contains("d") ? vector(j["d"], path + ".d", n) : Vector::Ones(n);
  } else if (j.contains("raw")) {
    mp = parse_raw(j["raw"], path + ".raw", n);
  } else {
    invalid(path + ": needs composite constants (a, b, D, P, d) or a raw block");
  }
  // inputs may be given alongside either parameterization
  if (j.contains("E_f")) mp.field_voltage = vector(j["E_f"], path + ".E_f", n);
  if (j.contains("nu")) mp.control_voltage = vector(j["nu"], path + ".nu", n);
  if (j.contains("tau")) mp.time_constant = vector(j["tau"], path + ".tau", n);
  if (j.contains("u")) mp.input = vector(j["u"], path + ".u", n);
  return mp;
}

sim::ParameterSet parse_set(const json& j, const std::string& path, int n) {
  sim::ParameterSet set{parse_network(field(j, "network", path), path + ".network", n),
                        parse_machines(field(j, "machines", path), path + ".machines", n)};
  set.network.validate(path + ".network");
  set.machines.validate(n, path + ".machines");
  return set;
}

void parse_observers(const json& j, sim::ObserverConfig& obs, std::vector<std::string>& present,
                     int n) {
  const std::string path = "observers";
  if (!j.is_object()) invalid(path + ": expected an object");
  if (j.contains("pebo")) {
    const json& p = j["pebo"];
    if (p.contains("xi_E0")) obs.pebo_xi0 = vector(p["xi_E0"], path + ".pebo.xi_E0", n);
  }
  if (j.contains("filter")) {
    const json& f = j["filter"];
    if (f.contains("kind")) {
      const std::string kind = f["kind"].is_string() ? f["kind"].get<std::string>() : "";
      if (kind == "first_row_lags") {
        obs.filter.kind = sim::FilterKind::FirstRowLags;
      } else if (kind == "diagonal_lags") {
        obs.filter.kind = sim::FilterKind::DiagonalLags;
      } else {
        invalid(path + ".filter.kind: expected first_row_lags or diagonal_lags");
      }
    }
    if (f.contains("poles")) {
      const Vector poles = vector(f["poles"], path + ".filter.poles", n - 1);
      obs.filter.poles.assign(poles.data(), poles.data() + poles.size());
    }
  }
  if (j.contains("drem")) {
    present.push_back("drem");
    const json& d = j["drem"];
    if (d.contains("gamma")) obs.drem_gamma = vector(d["gamma"], path + ".drem.gamma", n);
    if (d.contains("theta0")) obs.drem_theta0 = vector(d["theta0"], path + ".drem.theta0", n);
  }
  if (j.contains("ftc")) {
    present.push_back("ftc");
    const json& f = j["ftc"];
    if (f.contains("gamma")) obs.ftc_gamma = number(f["gamma"], path + ".ftc.gamma");
    if (f.contains("mu")) obs.ftc_mu = number(f["mu"], path + ".ftc.mu");
    if (f.contains("theta0")) obs.ftc_theta0 = vector(f["theta0"], path + ".ftc.theta0", n);
  }
  if (j.contains("kalman")) {
    present.push_back("kalman");
    const json& k = j["kalman"];
    if (k.contains("S")) obs.kalman_noise = matrix(k["S"], path + ".kalman.S", n);
    if (k.contains("H0")) obs.kalman_riccati0 = matrix(k["H0"], path + ".kalman.H0", n);
    if (k.contains("E_hat0")) {
      obs.kalman_estimate0 = vector(k["E_hat0"], path + ".kalman.E_hat0", n);
    }
    if (k.contains("divergence_bound")) {
      obs.kalman_divergence_bound =
          number(k["divergence_bound"], path + ".kalman.divergence_bound");
    }
  }
  if (j.contains("speed")) {
    present.push_back("speed");
    const json& s = j["speed"];
    if (s.contains("k_omega")) obs.speed_gain = vector(s["k_omega"], path + ".speed.k_omega", n);
    if (s.contains("xi0")) obs.speed_xi0 = vector(s["xi0"], path + ".speed.xi0", n);
  }
}

void enable(sim::ObserverConfig& obs, const std::vector<std::string>& names) {
  if (names.empty()) invalid("observers: selection is empty");
  obs.drem = obs.ftc = obs.kalman = obs.speed = false;
  for (const std::string& name : names) {
    if (name == "drem") {
      obs.drem = true;
    } else if (name == "ftc") {
      obs.ftc = true;
    } else if (name == "kalman") {
      obs.kalman = true;
    } else if (name == "speed") {
      obs.speed = true;
    } else {
      invalid("observers: unknown observer '" + name + "'");
    }
  }
}

}  // namespace

std::vector<std::string> parse_observer_list(std::string_view text) {
  std::vector<std::string> names;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item != "drem" && item != "ftc" && item != "kalman" && item != "speed") {
      invalid("observers: unknown observer '" + item + "'");
    }
    names.push_back(item);
  }
  if (names.empty()) invalid("observers: selection is empty");
  return names;
}

ParsedConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  if (!doc.is_object()) invalid("document: expected a JSON object");
  if (!doc.contains("schema") || !doc["schema"].is_number_integer() || doc["schema"] != 1) {
    invalid("schema: expected schema 1");
  }

  ParsedConfig out;
  sim::Scenario& s = out.scenario;
  if (doc.contains("name") && doc["name"].is_string()) s.name = doc["name"].get<std::string>();

  const json& initial = field(doc, "initial", "document");
  const json& network = field(initial, "network", "initial");
  if (!network.contains("G_shunt") || !network["G_shunt"].is_array()) {
    invalid("initial.network.G_shunt: expected an array of numbers");
  }
  const int n = static_cast<int>(network["G_shunt"].size());
  if (n < 2) invalid("initial.network: at least 2 machines required, got " + std::to_string(n));
  if (doc.contains("machines") && number(doc["machines"], "machines") != n) {
    invalid("machines: count disagrees with initial.network.G_shunt");
  }

  s.initial = parse_set(initial, "initial", n);
  if (doc.contains("after")) {
    json merged = initial;
    merged.merge_patch(doc["after"]);
    s.after = parse_set(merged, "after", n);
  }
  if (doc.contains("event_time")) s.event_time = number(doc["event_time"], "event_time");
  if (doc.contains("t_end")) s.t_end = number(doc["t_end"], "t_end");
  if (doc.contains("dt")) s.dt = number(doc["dt"], "dt");

  const json& x0 = field(doc, "initial_state", "document");
  s.x0.rotor_angle =
      x0.contains("delta") ? vector(x0["delta"], "initial_state.delta", n) : Vector::Zero(n);
  s.x0.speed =
      x0.contains("omega") ? vector(x0["omega"], "initial_state.omega", n) : Vector::Zero(n);
  s.x0.voltage = vector(field(x0, "E", "initial_state"), "initial_state.E", n);

  s.observers = sim::default_observers(n);
  std::vector<std::string> present;
  if (doc.contains("observers")) parse_observers(doc["observers"], s.observers, present, n);

  if (doc.contains("diagnostics")) {
    const json& d = doc["diagnostics"];
    if (d.contains("gramian_window")) {
      s.gramian_window = number(d["gramian_window"], "diagnostics.gramian_window");
    }
    if (d.contains("output_map")) {
      const std::string map = d["output_map"].is_string() ? d["output_map"].get<std::string>() : "";
      if (map == "measured") {
        s.gramian_output = sim::OutputMap::Measured;
      } else if (map == "identity") {
        s.gramian_output = sim::OutputMap::Identity;
      } else {
        invalid("diagnostics.output_map: expected measured or identity");
      }
    }
  }

  std::vector<std::string> selected = present;
  bool explicit_selection = false;
  if (doc.contains("run")) {
    const json& r = doc["run"];
    if (r.contains("observers")) {
      if (!r["observers"].is_array()) invalid("run.observers: expected an array of names");
      selected.clear();
      explicit_selection = true;
      for (const json& name : r["observers"]) {
        if (!name.is_string()) invalid("run.observers: expected an array of names");
        selected.push_back(name.get<std::string>());
      }
      out.run.observers = selected;
    }
    if (r.contains("decimate")) {
      const double m = number(r["decimate"], "run.decimate");
      if (m < 1 || m != static_cast<int>(m)) invalid("run.decimate: expected a positive integer");
      out.run.decimate = static_cast<int>(m);
    }
  }
  if (explicit_selection || !selected.empty()) enable(s.observers, selected);
  s.validate();
  return out;
}

ParsedConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  ParsedConfig parsed = parse_config(text.str());
  parsed.run.scenario_path = path;
  return parsed;
}

void apply_run_config(sim::Scenario& s, const RunConfig& run) {
  const int n = s.machine_count();
  if (!run.observers.empty()) enable(s.observers, run.observers);
  if (!s.observers.any_enabled()) invalid("observers: selection is empty");
  auto positive = [](std::optional<double> v, const char* name) {
    if (v && !(*v > 0.0)) invalid(std::string(name) + " override must be positive");
    return v.has_value();
  };
  if (positive(run.gamma, "gamma")) s.observers.drem_gamma = Vector::Constant(n, *run.gamma);
  if (positive(run.k_omega, "k_omega")) s.observers.speed_gain = Vector::Constant(n, *run.k_omega);
  if (run.mu) {
    if (!(*run.mu > 0.0 && *run.mu < 1.0)) invalid("mu override must lie in (0, 1)");
    s.observers.ftc_mu = *run.mu;
  }
  if (positive(run.k, "k")) s.observers.filter.poles.assign(n - 1, *run.k);
  if (positive(run.dt, "dt")) s.dt = *run.dt;
  if (positive(run.t_end, "t_end")) s.t_end = *run.t_end;
  if (run.decimate < 1) invalid("decimate must be at least 1");
  s.validate();
}

}  // namespace powerobs::cli
