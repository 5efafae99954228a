#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

// Flux-decay model of a Kron-reduced n-machine network with lossy lines.
namespace powerobs::model {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Line and shunt data of the reduced network. Diagonal entries of
/// `admittance` and `admittance_angle` are never read.
struct NetworkParams {
  Matrix admittance;        // Y_ij, p.u., symmetric
  Matrix admittance_angle;  // alpha_ij, rad, symmetric
  Vector shunt_conductance; // G_mii
  Vector shunt_susceptance; // B_mii

  int size() const { return static_cast<int>(shunt_conductance.size()); }

  /// Throws ValidationError; `path` prefixes the offending field name.
  void validate(const std::string& path = "network") const;
};

/// Composite per-machine constants of the compact model.
struct MachineParams {
  Vector voltage_decay;     // a_i, 1/s
  Vector voltage_coupling;  // b_i, 1/s
  Vector damping;           // D_i, 1/s
  Vector mech_power;        // P_i
  Vector power_scale;       // d_i
  Vector field_voltage;     // E_fi
  Vector control_voltage;   // nu_i
  Vector time_constant;     // tau_i
  // When set, used as u directly instead of (E_f + nu) / tau.
  std::optional<Vector> input;

  int size() const { return static_cast<int>(voltage_decay.size()); }

  void validate(int n, const std::string& path = "machines") const;
};

/// Physical constants from which the composite constants are derived.
struct RawMachineConstants {
  Vector inertia;            // M_i
  Vector mech_damping;       // D_mi
  Vector mech_power;         // P_mi
  Vector time_constant;      // tau_i
  double nominal_frequency;  // omega_0
  Vector d_reactance;        // x_di
  Vector d_transient;        // x'_di
  Vector shunt_susceptance;  // B_mii
  Vector field_voltage;
  Vector control_voltage;
};

struct DerivedParams {
  MachineParams params;
  std::vector<std::string> warnings;
};

DerivedParams derive_params(const RawMachineConstants& raw);

struct SystemState {
  Vector rotor_angle;  // delta, rad
  Vector speed;        // omega, rad/s
  Vector voltage;      // E, p.u.

  int size() const { return static_cast<int>(rotor_angle.size()); }
};

/// The signal set available to the observers.
struct Measurements {
  Vector rotor_angle;
  Vector input;  // u
  Vector active_power;
  Vector reactive_power;
};

struct Currents {
  Vector quadrature;  // I_q
  Vector direct;      // I_d
};

struct Powers {
  Vector active;    // P_e
  Vector reactive;  // Q_e
};

/// S(delta), T(delta) with I_q = S E and I_d = T E.
struct CurrentMaps {
  Matrix quadrature;
  Matrix direct;
};

Currents currents(const SystemState& state, const NetworkParams& net);

Powers powers(const SystemState& state, const Currents& currents);

/// u = (E_f + nu) / tau unless an input vector is configured directly.
Vector control_input(const MachineParams& mp);

Measurements measure(const SystemState& state, const MachineParams& mp, const NetworkParams& net);

/// A(t) of the voltage dynamics dE/dt = A E + u.
Matrix voltage_dynamics_matrix(const Vector& rotor_angle, const MachineParams& mp,
                               const NetworkParams& net);

CurrentMaps current_maps(const Vector& rotor_angle, const NetworkParams& net);

/// Row i is P_ei T_i - Q_ei S_i, so C E = 0 for measurements generated by
/// the model at voltage E.
Matrix voltage_annihilator(const Measurements& meas, const NetworkParams& net);

/// Right-hand side of the plant; the returned value holds time derivatives.
SystemState plant_rhs(const SystemState& state, const MachineParams& mp, const NetworkParams& net);

}  // namespace powerobs::model
