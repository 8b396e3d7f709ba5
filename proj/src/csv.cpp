#include "mfpde/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mfpde/version.hpp"

namespace mfpde {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t lineno) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    std::string cell = line.substr(pos, comma - pos);
    const auto first = cell.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      std::ostringstream msg;
      msg << "csv: empty cell at line " << lineno;
      throw CsvParseError(msg.str());
    }
    const auto last = cell.find_last_not_of(" \t\r");
    cell = cell.substr(first, last - first + 1);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') {
      std::ostringstream msg;
      msg << "csv: cannot parse '" << cell << "' at line " << lineno;
      throw CsvParseError(msg.str());
    }
    out.push_back(v);
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return out;
}

}  // namespace

Eigen::MatrixXd read_cloud_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto content = line.find_first_not_of(" \t\r");
    if (content == std::string::npos) continue;  // blank line
    if (line[content] == '#') continue;
    rows.push_back(parse_row(line, lineno));
    if (rows.back().size() != rows.front().size()) {
      std::ostringstream msg;
      msg << "csv: ragged row at line " << lineno << " (" << rows.back().size() << " vs "
          << rows.front().size() << " columns)";
      throw CsvParseError(msg.str());
    }
  }
  if (rows.empty()) throw CsvParseError("csv: no data rows");
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index d = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd points(d, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < d; ++k)
      points(k, i) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  return points;
}

Eigen::MatrixXd read_cloud_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvParseError("csv: cannot open '" + path + "'");
  return read_cloud_csv(in);
}

void write_cloud_csv(std::ostream& out, const Eigen::MatrixXd& points) {
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    for (Eigen::Index k = 0; k < points.rows(); ++k) {
      if (k) out << ',';
      out << fmt_double(points(k, i));
    }
    out << '\n';
  }
}

void write_csv_table(std::ostream& out, const HeaderKV& header,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<std::string>>& rows) {
  out << "# mfpde " << kVersion << '\n';
  for (const auto& [k, v] : header) out << "# " << k << " = " << v << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ',';
    out << columns[c];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << row[c];
    }
    out << '\n';
  }
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report,
                           const HeaderKV& config_header) {
  HeaderKV header = config_header;
  header.emplace_back("limit_value", fmt_double(report.limit_value));
  if (report.rate.valid) {
    header.emplace_back("rate_slope", fmt_double(report.rate.slope));
    header.emplace_back("rate_slope_stderr", fmt_double(report.rate.slope_stderr));
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : report.rows)
    rows.push_back({std::to_string(r.N), fmt_double(r.value), fmt_double(r.std_error),
                    fmt_double(r.w2_proxy), fmt_double(r.gap)});
  write_csv_table(out, header, {"N", "value", "std_error", "w2_proxy", "gap"}, rows);
}

void write_chaos_csv(std::ostream& out, const ChaosReport& report, const HeaderKV& config_header) {
  HeaderKV header = config_header;
  header.emplace_back("target_value", fmt_double(report.target_value));
  header.emplace_back("bias_budget_coefficient", fmt_double(report.budget_coefficient));
  header.emplace_back("pilot_N", std::to_string(report.pilot_N));
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : report.rows)
    rows.push_back({std::to_string(r.N), fmt_double(r.estimate), fmt_double(r.std_error),
                    fmt_double(r.bias), fmt_double(r.budget), r.pass ? "pass" : "fail"});
  write_csv_table(out, header, {"N", "estimate", "std_error", "bias", "budget", "verdict"}, rows);
}

}  // namespace mfpde
