#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfpde/lab.hpp"

namespace mfpde {

struct CsvParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// deterministic full-precision formatting used by every writer
std::string fmt_double(double v);

// Point clouds: one row per particle, d comma-separated columns, '.' decimal
// separator, no header. Returned in the d x N layout.
Eigen::MatrixXd read_cloud_csv(std::istream& in);
Eigen::MatrixXd read_cloud_csv_file(const std::string& path);
void write_cloud_csv(std::ostream& out, const Eigen::MatrixXd& points);

using HeaderKV = std::vector<std::pair<std::string, std::string>>;

// '#'-prefixed header lines (library version first, then the resolved
// configuration), a column-name line, then the rows.
void write_csv_table(std::ostream& out, const HeaderKV& header,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<std::string>>& rows);

// report writers; runtimes stay out of the files so that identical
// config+seed reruns are byte-identical
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report,
                           const HeaderKV& config_header);
void write_chaos_csv(std::ostream& out, const ChaosReport& report, const HeaderKV& config_header);

}  // namespace mfpde
