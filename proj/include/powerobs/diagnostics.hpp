#pragma once

#include "powerobs/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace powerobs::observers {

using model::Matrix;
using model::Vector;

struct GramianBounds {
  Matrix gramian;
  double min_eig = 0.0;
  double max_eig = 0.0;

  /// min_eig / max_eig, or 0 for a zero Gramian.
  double ratio() const;
};

/// Streaming trapezoidal accumulation of the integral of
/// Phi^T C^T C Phi over uniformly spaced samples.
class GramianAccumulator {
 public:
  GramianAccumulator(int n, double dt);

  void add(const Matrix& transition, const Matrix& output);
  int samples() const { return samples_; }

  /// Throws EmptyWindow with fewer than two samples.
  GramianBounds result() const;

 private:
  double dt_;
  int samples_ = 0;
  Matrix sum_;
  Matrix first_;
  Matrix last_;
};

GramianBounds observability_gramian(std::span<const Matrix> transition,
                                    std::span<const Matrix> output, double dt);

/// -(1/gamma) ln(1 - mu)
double excitation_threshold(double gamma, double mu);

struct ExcitationReport {
  std::vector<double> running;  // trapezoidal integral of Delta^2 at each sample
  double integral = 0.0;
  double threshold = 0.0;
  std::optional<double> crossing_time;  // first sample at or beyond the threshold
  double tail_increment = 0.0;          // integral over the final 20% of samples
  bool still_growing = false;           // tail_increment > 0
};

ExcitationReport excitation_monitor(std::span<const double> determinant, double dt, double gamma,
                                    double mu);

}  // namespace powerobs::observers
