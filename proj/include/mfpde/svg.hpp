#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mfpde {

// Static single-series line chart, no display dependencies, byte-stable for
// identical inputs. Log axes fall back to linear when a value is <= 0.
void write_line_chart_svg(std::ostream& out, const std::string& title,
                          const std::vector<double>& xs, const std::vector<double>& ys,
                          const std::string& x_label, const std::string& y_label,
                          bool log_x = false, bool log_y = false);

}  // namespace mfpde
