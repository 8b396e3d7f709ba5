#include "mfpde/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace mfpde {

namespace {

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

void write_line_chart_svg(std::ostream& out, const std::string& title,
                          const std::vector<double>& xs, const std::vector<double>& ys,
                          const std::string& x_label, const std::string& y_label, bool log_x,
                          bool log_y) {
  if (xs.size() != ys.size() || xs.empty())
    throw std::invalid_argument("write_line_chart_svg: bad series");

  const double width = 640, height = 440;
  const double ml = 70, mr = 20, mt = 40, mb = 50;

  bool use_log_x = log_x, use_log_y = log_y;
  for (double v : xs)
    if (v <= 0) use_log_x = false;
  for (double v : ys)
    if (v <= 0) use_log_y = false;

  std::vector<double> tx = xs, ty = ys;
  if (use_log_x)
    for (auto& v : tx) v = std::log10(v);
  if (use_log_y)
    for (auto& v : ty) v = std::log10(v);

  double xmin = *std::min_element(tx.begin(), tx.end());
  double xmax = *std::max_element(tx.begin(), tx.end());
  double ymin = *std::min_element(ty.begin(), ty.end());
  double ymax = *std::max_element(ty.begin(), ty.end());
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const auto px = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (width - ml - mr); };
  const auto py = [&](double v) {
    return height - mb - (v - ymin) / (ymax - ymin) * (height - mt - mb);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"14\">"
      << title << "</text>\n";

  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";

  // data-point ticks
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = px(tx[i]);
    out << "<line x1=\"" << fmt2(x) << "\" y1=\"" << height - mb << "\" x2=\"" << fmt2(x)
        << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt2(x) << "\" y=\"" << height - mb + 18
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"10\">" << fmt_tick(xs[i])
        << "</text>\n";
  }
  for (const double frac : {0.0, 0.5, 1.0}) {
    const double v = ymin + frac * (ymax - ymin);
    const double y = py(v);
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt2(y) << "\" x2=\"" << ml << "\" y2=\""
        << fmt2(y) << "\" stroke=\"black\"/>\n";
    const double shown = use_log_y ? std::pow(10.0, v) : v;
    out << "<text x=\"" << ml - 8 << "\" y=\"" << fmt2(y + 3)
        << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">" << fmt_tick(shown)
        << "</text>\n";
  }

  out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">" << x_label
      << (use_log_x ? " (log)" : "") << "</text>\n";
  out << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\" transform=\"rotate(-90 "
         "16 "
      << (mt + height - mb) / 2 << ")\">" << y_label << (use_log_y ? " (log)" : "") << "</text>\n";

  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < tx.size(); ++i) {
    if (i) out << ' ';
    out << fmt2(px(tx[i])) << ',' << fmt2(py(ty[i]));
  }
  out << "\"/>\n";
  for (std::size_t i = 0; i < tx.size(); ++i)
    out << "<circle cx=\"" << fmt2(px(tx[i])) << "\" cy=\"" << fmt2(py(ty[i]))
        << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  out << "</svg>\n";
}

}  // namespace mfpde
