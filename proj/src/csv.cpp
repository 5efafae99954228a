#include "powerobs/csv.hpp"

#include "powerobs/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace powerobs::cli {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<std::string> csv_header(const sim::TrajectoryLog& log) {
  const int n = log.machines;
  const sim::ObserverConfig& obs = log.observers;
  std::vector<std::string> h{"t"};
  auto group = [&](const std::string& prefix) {
    for (int i = 1; i <= n; ++i) h.push_back(prefix + "_" + std::to_string(i));
  };
  group("delta");
  group("omega");
  group("E");
  if (obs.drem) group("Ehat_drem");
  if (obs.ftc) group("Ehat_ftc");
  if (obs.kalman) group("Ehat_kalman");
  if (obs.speed) group("omegahat");
  if (obs.drem) h.push_back("err_E_drem");
  if (obs.ftc) h.push_back("err_E_ftc");
  if (obs.kalman) h.push_back("err_E_kalman");
  if (obs.speed) h.push_back("err_omega");
  if (obs.regression_needed()) {
    h.push_back("Delta");
    h.push_back("intDelta2");
  }
  if (obs.ftc) h.push_back("w");
  return h;
}

void write_csv(std::ostream& out, const sim::TrajectoryLog& log) {
  const std::vector<std::string> header = csv_header(log);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  const sim::ObserverConfig& obs = log.observers;
  for (std::size_t k = 0; k < log.size(); ++k) {
    std::string line = format_double(log.time[k]);
    auto put = [&line](double v) {
      line += ',';
      line += format_double(v);
    };
    auto put_all = [&put](const model::Vector& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) put(v[i]);
    };
    put_all(log.plant[k].rotor_angle);
    put_all(log.plant[k].speed);
    put_all(log.plant[k].voltage);
    if (obs.drem) put_all(log.drem_estimate[k]);
    if (obs.ftc) put_all(log.ftc_estimate[k]);
    if (obs.kalman) put_all(log.kalman_estimate[k]);
    if (obs.speed) put_all(log.speed_estimate[k]);
    if (obs.drem) put(log.err_drem[k]);
    if (obs.ftc) put(log.err_ftc[k]);
    if (obs.kalman) put(log.err_kalman[k]);
    if (obs.speed) put(log.err_speed[k]);
    if (obs.regression_needed()) {
      put(log.determinant[k]);
      put(log.excitation[k]);
    }
    if (obs.ftc) put(log.ftc_w[k]);
    out << line << '\n';
  }
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorKind::Validation, "csv: missing column '" + name + "'");
}

std::vector<double> CsvTable::values(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[c]);
  return out;
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "csv: empty input");
  {
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) table.header.push_back(cell);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw Error(ErrorKind::Parse, "csv: line " + std::to_string(line_no) +
                                          ": malformed number '" + cell + "'");
      }
      row.push_back(v);
    }
    if (row.size() != table.header.size()) {
      throw Error(ErrorKind::Parse, "csv: line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(table.header.size()) + " fields");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace powerobs::cli
