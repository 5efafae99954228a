#include "powerobs/diagnostics.hpp"

#include "powerobs/errors.hpp"

#include <cmath>
#include <string>

namespace powerobs::observers {

double GramianBounds::ratio() const {
  return max_eig > 0.0 ? min_eig / max_eig : 0.0;
}

GramianAccumulator::GramianAccumulator(int n, double dt)
    : dt_(dt), sum_(Matrix::Zero(n, n)), first_(Matrix::Zero(n, n)), last_(Matrix::Zero(n, n)) {
  if (!(dt > 0.0)) throw Error(ErrorKind::Validation, "gramian: dt must be positive");
}

void GramianAccumulator::add(const Matrix& transition, const Matrix& output) {
  const Matrix weighted = output * transition;
  last_ = weighted.transpose() * weighted;
  if (samples_ == 0) first_ = last_;
  sum_ += last_;
  ++samples_;
}

GramianBounds GramianAccumulator::result() const {
  if (samples_ < 2) {
    throw Error(ErrorKind::EmptyWindow, "gramian window holds " + std::to_string(samples_) +
                                            " sample(s); at least 2 are required");
  }
  GramianBounds out;
  out.gramian = dt_ * (sum_ - 0.5 * (first_ + last_));
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (out.gramian + out.gramian.transpose()),
                                                  Eigen::EigenvaluesOnly);
  out.min_eig = eig.eigenvalues().minCoeff();
  out.max_eig = eig.eigenvalues().maxCoeff();
  return out;
}

GramianBounds observability_gramian(std::span<const Matrix> transition,
                                    std::span<const Matrix> output, double dt) {
  if (transition.size() != output.size()) {
    throw Error(ErrorKind::Validation, "gramian: sample sequences differ in length");
  }
  const int n = transition.empty() ? 0 : static_cast<int>(transition.front().rows());
  GramianAccumulator acc(n, dt);
  for (std::size_t k = 0; k < transition.size(); ++k) acc.add(transition[k], output[k]);
  return acc.result();
}

double excitation_threshold(double gamma, double mu) {
  return -std::log(1.0 - mu) / gamma;
}

ExcitationReport excitation_monitor(std::span<const double> determinant, double dt, double gamma,
                                    double mu) {
  if (!(dt > 0.0) || !(gamma > 0.0) || !(mu > 0.0 && mu < 1.0)) {
    throw Error(ErrorKind::Validation, "excitation monitor: need dt > 0, gamma > 0, 0 < mu < 1");
  }
  ExcitationReport out;
  out.threshold = excitation_threshold(gamma, mu);
  const std::size_t count = determinant.size();
  out.running.reserve(count);
  // tail window starts at the first sample of the final 20%
  const std::size_t tail_start = count - count / 5;
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0) {
      const double a = determinant[k - 1];
      const double b = determinant[k];
      const double piece = 0.5 * dt * (a * a + b * b);
      total += piece;
      if (k > tail_start) tail += piece;
    }
    out.running.push_back(total);
    if (!out.crossing_time && total >= out.threshold) out.crossing_time = dt * k;
  }
  out.integral = total;
  out.tail_increment = tail;
  out.still_growing = tail > 0.0;
  return out;
}

}  // namespace powerobs::observers
