#pragma once

#include "powerobs/model.hpp"

namespace powerobs::observers {

using model::Matrix;
using model::Vector;

/// Open-loop copy of the voltage dynamics together with its transition
/// matrix. The initial error xi(0) - E(0) becomes the constant unknown
/// theta, with E = xi - transition * theta.
struct PeboState {
  Vector xi;
  Matrix transition;

  /// transition starts at the identity.
  static PeboState initial(const Vector& xi0);
};

PeboState pebo_rhs(const PeboState& state, const Matrix& dynamics, const Vector& input);

struct Regression {
  Vector y;    // C xi
  Matrix psi;  // C transition
};

Regression regression(const Matrix& annihilator, const PeboState& state);

Vector voltage_estimate(const PeboState& state, const Vector& theta);

}  // namespace powerobs::observers
