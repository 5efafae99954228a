#pragma once

#include "powerobs/model.hpp"

namespace powerobs::observers {

using model::Matrix;
using model::Vector;

/// Kalman-Bucy filter for dE/dt = A(t) E + u with the identically zero
/// output C(t) E.
struct KalmanState {
  Vector estimate;
  Matrix riccati;       // H, symmetric positive definite
  Matrix noise_design;  // S, symmetric positive definite
  double divergence_bound = 1e8;
};

struct KalmanDerivative {
  Vector estimate_rate;
  Matrix riccati_rate;
};

/// Throws RiccatiDivergence when the norm of H exceeds the configured bound.
KalmanDerivative kalman_rhs(const KalmanState& state, const Matrix& dynamics,
                            const Matrix& output, const Vector& input);

void symmetrize(Matrix& m);

}  // namespace powerobs::observers
