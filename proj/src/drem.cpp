#include "powerobs/drem.hpp"

#include "powerobs/errors.hpp"

#include <string>

namespace powerobs::observers {

FilterBank::FilterBank(int n, std::vector<FilterRow> rows) : n_(n), rows_(std::move(rows)) {
  if (static_cast<int>(rows_.size()) != n_) {
    throw Error(ErrorKind::Validation, "filter: expected " + std::to_string(n_) + " rows, got " +
                                           std::to_string(rows_.size()));
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const FilterRow& row = rows_[i];
    if (row.source_row < 0 || row.source_row >= n_) {
      throw Error(ErrorKind::Validation,
                  "filter.rows[" + std::to_string(i) + "]: source row out of range");
    }
    if (row.pole) {
      if (!(*row.pole > 0.0)) {
        throw Error(ErrorKind::Validation,
                    "filter.poles: pole of row " + std::to_string(i) + " must be positive");
      }
      ++lagged_rows_;
    }
  }
}

FilterBank FilterBank::first_row_lags(int n, const std::vector<double>& poles) {
  if (static_cast<int>(poles.size()) != n - 1) {
    throw Error(ErrorKind::Validation, "filter.poles: expected " + std::to_string(n - 1) +
                                           " poles, got " + std::to_string(poles.size()));
  }
  std::vector<FilterRow> rows{{0, std::nullopt}};
  for (double k : poles) rows.push_back({0, k});
  return FilterBank(n, std::move(rows));
}

FilterBank FilterBank::diagonal_lags(int n, const std::vector<double>& poles) {
  if (static_cast<int>(poles.size()) != n - 1) {
    throw Error(ErrorKind::Validation, "filter.poles: expected " + std::to_string(n - 1) +
                                           " poles, got " + std::to_string(poles.size()));
  }
  std::vector<FilterRow> rows{{0, std::nullopt}};
  for (int i = 1; i < n; ++i) rows.push_back({i, poles[i - 1]});
  return FilterBank(n, std::move(rows));
}

Vector FilterBank::rhs(const Vector& state, const Regression& input) const {
  Vector rate(state_size());
  int offset = 0;
  for (const FilterRow& row : rows_) {
    if (!row.pole) continue;
    const double k = *row.pole;
    rate[offset] = k * (input.y[row.source_row] - state[offset]);
    rate.segment(offset + 1, n_) =
        k * (input.psi.row(row.source_row).transpose() - state.segment(offset + 1, n_));
    offset += n_ + 1;
  }
  return rate;
}

Regression FilterBank::output(const Vector& state, const Regression& input) const {
  Regression out{Vector(n_), Matrix(n_, n_)};
  int offset = 0;
  for (int i = 0; i < n_; ++i) {
    const FilterRow& row = rows_[i];
    if (row.pole) {
      out.y[i] = state[offset];
      out.psi.row(i) = state.segment(offset + 1, n_).transpose();
      offset += n_ + 1;
    } else {
      out.y[i] = input.y[row.source_row];
      out.psi.row(i) = input.psi.row(row.source_row);
    }
  }
  return out;
}

Vector FilterBank::step(const Vector& state, const Regression& input, double dt) const {
  const Vector k1 = rhs(state, input);
  const Vector k2 = rhs(state + 0.5 * dt * k1, input);
  const Vector k3 = rhs(state + 0.5 * dt * k2, input);
  const Vector k4 = rhs(state + dt * k3, input);
  return state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Matrix adjugate(const Matrix& m) {
  const Eigen::Index n = m.rows();
  if (n == 1) return Matrix::Ones(1, 1);
  Matrix adj(n, n);
  Matrix minor(n - 1, n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // cofactor of entry (j, i) lands at (i, j)
      for (Eigen::Index r = 0, mr = 0; r < n; ++r) {
        if (r == j) continue;
        for (Eigen::Index c = 0, mc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(mr, mc++) = m(r, c);
        }
        ++mr;
      }
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      adj(i, j) = sign * minor.determinant();
    }
  }
  return adj;
}

MixedRegression drem_mix(const Vector& Y, const Matrix& Psi) {
  return {adjugate(Psi) * Y, Psi.determinant()};
}

}  // namespace powerobs::observers
