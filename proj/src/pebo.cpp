#include "powerobs/pebo.hpp"

namespace powerobs::observers {

PeboState PeboState::initial(const Vector& xi0) {
  return {xi0, Matrix::Identity(xi0.size(), xi0.size())};
}

PeboState pebo_rhs(const PeboState& state, const Matrix& dynamics, const Vector& input) {
  return {dynamics * state.xi + input, dynamics * state.transition};
}

Regression regression(const Matrix& annihilator, const PeboState& state) {
  return {annihilator * state.xi, annihilator * state.transition};
}

Vector voltage_estimate(const PeboState& state, const Vector& theta) {
  return state.xi - state.transition * theta;
}

}  // namespace powerobs::observers
