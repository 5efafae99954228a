#pragma once

#include "powerobs/simulator.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace powerobs::cli {

/// Shortest-round-trip-safe text form: 17 significant digits.
std::string format_double(double value);

std::vector<std::string> csv_header(const sim::TrajectoryLog& log);

void write_csv(std::ostream& out, const sim::TrajectoryLog& log);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Throws ValidationError when the column is missing.
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
};

/// Throws ParseError naming the line of a malformed row.
CsvTable read_csv(std::istream& in);

}  // namespace powerobs::cli
