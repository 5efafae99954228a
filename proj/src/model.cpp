#include "powerobs/model.hpp"

#include "powerobs/errors.hpp"

#include <cmath>

namespace powerobs::model {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::Validation, message);
}

void require_size(const Vector& v, int n, const std::string& path) {
  require(v.size() == n, path + ": expected " + std::to_string(n) + " entries, got " +
                             std::to_string(v.size()));
}

void require_positive(const Vector& v, const std::string& path) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    require(std::isfinite(v[i]) && v[i] > 0.0,
            path + "[" + std::to_string(i) + "] must be positive, got " + std::to_string(v[i]));
  }
}

void require_finite(const Vector& v, const std::string& path) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    require(std::isfinite(v[i]), path + "[" + std::to_string(i) + "] is not finite");
  }
}

}  // namespace

void NetworkParams::validate(const std::string& path) const {
  const int n = size();
  require(n >= 2, path + ": at least 2 machines required, got " + std::to_string(n));
  require_size(shunt_susceptance, n, path + ".B_shunt");
  require_finite(shunt_conductance, path + ".G_shunt");
  require_finite(shunt_susceptance, path + ".B_shunt");
  require(admittance.rows() == n && admittance.cols() == n, path + ".Y: expected " +
                                                                std::to_string(n) + "x" +
                                                                std::to_string(n));
  require(admittance_angle.rows() == n && admittance_angle.cols() == n,
          path + ".alpha: expected " + std::to_string(n) + "x" + std::to_string(n));
  constexpr double kTol = 1e-12;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::string at = "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      require(std::isfinite(admittance(i, j)) && admittance(i, j) >= 0.0,
              path + ".Y" + at + " must be non-negative");
      require(std::abs(admittance(i, j) - admittance(j, i)) <= kTol,
              path + ".Y" + at + " is not symmetric");
      require(std::isfinite(admittance_angle(i, j)), path + ".alpha" + at + " is not finite");
      require(std::abs(admittance_angle(i, j) - admittance_angle(j, i)) <= kTol,
              path + ".alpha" + at + " is not symmetric");
    }
  }
}

void MachineParams::validate(int n, const std::string& path) const {
  require_size(voltage_decay, n, path + ".a");
  require_size(voltage_coupling, n, path + ".b");
  require_size(damping, n, path + ".D");
  require_size(mech_power, n, path + ".P");
  require_size(power_scale, n, path + ".d");
  require_positive(voltage_decay, path + ".a");
  for (Eigen::Index i = 0; i < voltage_coupling.size(); ++i) {
    require(std::isfinite(voltage_coupling[i]) && voltage_coupling[i] >= 0.0,
            path + ".b[" + std::to_string(i) + "] must be non-negative");
  }
  require_positive(damping, path + ".D");
  require_positive(power_scale, path + ".d");
  require_finite(mech_power, path + ".P");
  if (input) {
    require_size(*input, n, path + ".u");
    require_finite(*input, path + ".u");
  } else {
    require_size(field_voltage, n, path + ".E_f");
    require_size(control_voltage, n, path + ".nu");
    require_size(time_constant, n, path + ".tau");
    require_finite(field_voltage, path + ".E_f");
    require_finite(control_voltage, path + ".nu");
    require_positive(time_constant, path + ".tau");
  }
}

DerivedParams derive_params(const RawMachineConstants& raw) {
  const int n = static_cast<int>(raw.inertia.size());
  require_size(raw.mech_damping, n, "raw.D_m");
  require_size(raw.mech_power, n, "raw.P_m");
  require_size(raw.time_constant, n, "raw.tau");
  require_size(raw.d_reactance, n, "raw.x_d");
  require_size(raw.d_transient, n, "raw.x_dp");
  require_size(raw.shunt_susceptance, n, "raw.B_shunt");
  require_positive(raw.inertia, "raw.M");
  require_positive(raw.mech_damping, "raw.D_m");
  require_positive(raw.mech_power, "raw.P_m");
  require_positive(raw.time_constant, "raw.tau");
  require_positive(raw.d_reactance, "raw.x_d");
  require_positive(raw.d_transient, "raw.x_dp");
  require(std::isfinite(raw.nominal_frequency) && raw.nominal_frequency > 0.0,
          "raw.omega_0 must be positive");

  DerivedParams out;
  MachineParams& mp = out.params;
  mp.damping = raw.mech_damping.cwiseQuotient(raw.inertia);
  mp.power_scale = raw.nominal_frequency * raw.inertia.cwiseInverse();
  mp.mech_power = mp.power_scale.cwiseProduct(raw.mech_power);
  mp.voltage_decay.resize(n);
  mp.voltage_coupling.resize(n);
  for (int i = 0; i < n; ++i) {
    const double gap = raw.d_reactance[i] - raw.d_transient[i];
    require(gap >= 0.0, "raw.x_d[" + std::to_string(i) + "] must not be below raw.x_dp");
    mp.voltage_decay[i] = (1.0 - gap * raw.shunt_susceptance[i]) / raw.time_constant[i];
    mp.voltage_coupling[i] = gap / raw.time_constant[i];
    if (mp.voltage_decay[i] <= 0.0) {
      throw Error(ErrorKind::NonPositiveDerivedConstant,
                  "derived a[" + std::to_string(i) + "] = " + std::to_string(mp.voltage_decay[i]) +
                      " is not positive");
    }
    if (mp.voltage_coupling[i] == 0.0) {
      out.warnings.push_back("derived b[" + std::to_string(i) +
                             "] is zero; machine voltage is decoupled from the network");
    }
  }
  mp.time_constant = raw.time_constant;
  mp.field_voltage = raw.field_voltage.size() == n ? raw.field_voltage : Vector::Zero(n);
  mp.control_voltage = raw.control_voltage.size() == n ? raw.control_voltage : Vector::Zero(n);
  return out;
}

Currents currents(const SystemState& state, const NetworkParams& net) {
  const int n = state.size();
  const Vector& delta = state.rotor_angle;
  const Vector& E = state.voltage;
  Currents out{net.shunt_conductance.cwiseProduct(E), -net.shunt_susceptance.cwiseProduct(E)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double angle = delta[i] - delta[j] + net.admittance_angle(i, j);
      out.quadrature[i] += E[j] * net.admittance(i, j) * std::sin(angle);
      out.direct[i] -= E[j] * net.admittance(i, j) * std::cos(angle);
    }
  }
  return out;
}

Powers powers(const SystemState& state, const Currents& currents) {
  return {state.voltage.cwiseProduct(currents.quadrature),
          state.voltage.cwiseProduct(currents.direct)};
}

Vector control_input(const MachineParams& mp) {
  if (mp.input) return *mp.input;
  return (mp.field_voltage + mp.control_voltage).cwiseQuotient(mp.time_constant);
}

Measurements measure(const SystemState& state, const MachineParams& mp, const NetworkParams& net) {
  const Powers p = powers(state, currents(state, net));
  return {state.rotor_angle, control_input(mp), p.active, p.reactive};
}

Matrix voltage_dynamics_matrix(const Vector& rotor_angle, const MachineParams& mp,
                               const NetworkParams& net) {
  const int n = static_cast<int>(rotor_angle.size());
  Matrix A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        A(i, i) = -mp.voltage_decay[i];
      } else {
        A(i, j) = mp.voltage_coupling[i] * net.admittance(i, j) *
                  std::cos(rotor_angle[i] - rotor_angle[j] + net.admittance_angle(i, j));
      }
    }
  }
  return A;
}

CurrentMaps current_maps(const Vector& rotor_angle, const NetworkParams& net) {
  const int n = static_cast<int>(rotor_angle.size());
  CurrentMaps out{Matrix(n, n), Matrix(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        out.quadrature(i, i) = net.shunt_conductance[i];
        out.direct(i, i) = -net.shunt_susceptance[i];
      } else {
        const double angle = rotor_angle[i] - rotor_angle[j] + net.admittance_angle(i, j);
        out.quadrature(i, j) = net.admittance(i, j) * std::sin(angle);
        out.direct(i, j) = -net.admittance(i, j) * std::cos(angle);
      }
    }
  }
  return out;
}

Matrix voltage_annihilator(const Measurements& meas, const NetworkParams& net) {
  const CurrentMaps maps = current_maps(meas.rotor_angle, net);
  return meas.active_power.asDiagonal() * maps.direct -
         meas.reactive_power.asDiagonal() * maps.quadrature;
}

SystemState plant_rhs(const SystemState& state, const MachineParams& mp, const NetworkParams& net) {
  const Currents I = currents(state, net);
  const Vector active = state.voltage.cwiseProduct(I.quadrature);
  const Matrix A = voltage_dynamics_matrix(state.rotor_angle, mp, net);
  SystemState rate;
  rate.rotor_angle = state.speed;
  rate.speed = -mp.damping.cwiseProduct(state.speed) + mp.mech_power -
               mp.power_scale.cwiseProduct(active);
  rate.voltage = A * state.voltage + control_input(mp);
  return rate;
}

}  // namespace powerobs::model
