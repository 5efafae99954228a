#pragma once

#include "powerobs/pebo.hpp"

#include <optional>
#include <vector>

namespace powerobs::observers {

/// One row of the LTI filter F(p) applied to the regression: either the
/// source row passed through, or the source row behind a lag k/(p+k).
struct FilterRow {
  int source_row = 0;
  std::optional<double> pole;
};

/// Realization of F(p). The internal state holds, for every lagged row, the
/// filtered y entry followed by the n filtered psi entries; all initial
/// states are zero.
class FilterBank {
 public:
  FilterBank(int n, std::vector<FilterRow> rows);

  /// Row 0 passes through; rows 1..n-1 are lags of row 0 with the given
  /// poles. For n = 2 this is F(p) = [[1, 0], [k/(p+k), 0]].
  static FilterBank first_row_lags(int n, const std::vector<double>& poles);

  /// Row 0 passes through; row i > 0 is row i behind its own lag.
  static FilterBank diagonal_lags(int n, const std::vector<double>& poles);

  int size() const { return n_; }
  int state_size() const { return lagged_rows_ * (n_ + 1); }
  const std::vector<FilterRow>& rows() const { return rows_; }

  Vector initial_state() const { return Vector::Zero(state_size()); }

  Vector rhs(const Vector& state, const Regression& input) const;

  /// Filtered pair (Y, Psi) for the current state and unfiltered input.
  Regression output(const Vector& state, const Regression& input) const;

  /// Advances the state by dt with the input held constant (classical RK4).
  Vector step(const Vector& state, const Regression& input, double dt) const;

 private:
  int n_;
  int lagged_rows_ = 0;
  std::vector<FilterRow> rows_;
};

struct MixedRegression {
  Vector script_y;     // adj(Psi) Y
  double determinant;  // Delta = det(Psi)
};

/// Adjugate via cofactors; valid for singular matrices.
Matrix adjugate(const Matrix& m);

MixedRegression drem_mix(const Vector& Y, const Matrix& Psi);

}  // namespace powerobs::observers
