#include "powerobs/analysis.hpp"

#include <cmath>
#include <vector>

namespace powerobs::sim {

std::optional<double> settling_time(std::span<const double> times,
                                    std::span<const double> values, double threshold) {
  if (values.empty()) return std::nullopt;
  if (values.back() > threshold) return std::nullopt;
  std::size_t last_above = values.size();
  for (std::size_t k = values.size(); k-- > 0;) {
    if (values[k] > threshold) {
      last_above = k;
      break;
    }
  }
  if (last_above == values.size()) return 0.0;
  const double t0 = times[last_above], t1 = times[last_above + 1];
  const double v0 = values[last_above], v1 = values[last_above + 1];
  return t0 + (v0 - threshold) / (v0 - v1) * (t1 - t0);
}

std::optional<double> fit_log_slope(std::span<const double> times,
                                    std::span<const double> values, double lower, double upper) {
  std::vector<double> ts, ls;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double mag = std::abs(values[k]);
    if (mag >= lower && mag <= upper) {
      ts.push_back(times[k]);
      ls.push_back(std::log(mag));
    } else if (!ts.empty()) {
      break;
    }
  }
  if (ts.size() < 3) return std::nullopt;
  double mt = 0.0, ml = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) mt += ts[k], ml += ls[k];
  mt /= static_cast<double>(ts.size());
  ml /= static_cast<double>(ts.size());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    num += (ts[k] - mt) * (ls[k] - ml);
    den += (ts[k] - mt) * (ts[k] - mt);
  }
  return num / den;
}

}  // namespace powerobs::sim
