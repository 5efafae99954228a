#include "powerobs/kalman_bucy.hpp"

#include "powerobs/errors.hpp"

#include <string>

namespace powerobs::observers {

KalmanDerivative kalman_rhs(const KalmanState& state, const Matrix& dynamics,
                            const Matrix& output, const Vector& input) {
  const Matrix& H = state.riccati;
  const double norm = H.norm();
  if (!(norm <= state.divergence_bound)) {
    throw Error(ErrorKind::RiccatiDivergence,
                "Riccati solution norm " + std::to_string(norm) + " exceeds bound " +
                    std::to_string(state.divergence_bound));
  }
  const Matrix gain = H * output.transpose() * output;
  KalmanDerivative out;
  out.estimate_rate = (dynamics - gain) * state.estimate + input;
  out.riccati_rate = H * dynamics.transpose() + dynamics * H - gain * H + state.noise_design;
  return out;
}

void symmetrize(Matrix& m) {
  m = 0.5 * (m + m.transpose()).eval();
}

}  // namespace powerobs::observers
