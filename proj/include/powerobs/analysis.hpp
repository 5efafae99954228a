#pragma once

#include <optional>
#include <span>

namespace powerobs::sim {

/// Time after which `values` stays at or below `threshold`, with the last
/// crossing located by linear interpolation. Zero when it never exceeds the
/// threshold; absent when the final sample is still above it.
std::optional<double> settling_time(std::span<const double> times,
                                    std::span<const double> values, double threshold);

/// Least-squares slope of log|v| against t over samples whose magnitude lies
/// in [lower, upper], taken from the first contiguous run of such samples.
/// Absent with fewer than three samples.
std::optional<double> fit_log_slope(std::span<const double> times,
                                    std::span<const double> values, double lower, double upper);

}  // namespace powerobs::sim
