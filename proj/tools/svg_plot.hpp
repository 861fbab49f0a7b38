#ifndef FFGS_TOOLS_SVG_PLOT_HPP
#define FFGS_TOOLS_SVG_PLOT_HPP

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace ffgs::cli {

struct Series {
  std::string label;
  std::vector<double> x, y, err;
};

struct PlotSpec {
  std::string title, x_label, y_label;
  double y_min = 0.0, y_max = 1.0;
  double marker_x = NAN;  // vertical dashed line, skipped if NaN
  std::vector<std::string> comments;
};

/// Line plot with error bars, ticks and a legend.
inline std::string svg_line_plot(const std::vector<Series>& series, const PlotSpec& spec) {
  constexpr double w = 640, h = 440, left = 70, right = 150, top = 40, bottom = 60;
  const double pw = w - left - right, ph = h - top - bottom;
  double x0 = INFINITY, x1 = -INFINITY;
  for (const auto& s : series) {
    for (double x : s.x) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
    }
  }
  if (!(x1 > x0)) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (spec.y_max - std::clamp(y, spec.y_min, spec.y_max)) / (spec.y_max - spec.y_min) * ph; };
  static const char* palette[] = {"#1b6ca8", "#d1495b", "#2e933c", "#edae49", "#6a4c93", "#00798c"};

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  for (const auto& c : spec.comments) os << "<!-- " << c << " -->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
     << " " << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << spec.title << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double yv = spec.y_min + (spec.y_max - spec.y_min) * i / 5.0, y = sy(yv);
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << fmt(yv, 3) << "</text>\n";
  }
  for (int i = 0; i <= 8; ++i) {
    const double xv = x0 + (x1 - x0) * i / 8.0, x = sx(xv);
    os << "<line x1=\"" << x << "\" y1=\"" << top + ph << "\" x2=\"" << x << "\" y2=\"" << top + ph + 5
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << top + ph + 20 << "\" text-anchor=\"middle\">" << fmt(xv, 3) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">" << spec.x_label << "</text>\n";
  os << "<text transform=\"translate(20," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << spec.y_label
     << "</text>\n";
  if (std::isfinite(spec.marker_x) && spec.marker_x >= x0 && spec.marker_x <= x1) {
    const double x = sx(spec.marker_x);
    os << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\"" << top + ph
       << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = palette[k % std::size(palette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) os << (i ? " " : "") << sx(s.x[i]) << "," << sy(s.y[i]);
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = sx(s.x[i]);
      if (i < s.err.size() && s.err[i] > 0.0) {
        os << "<line x1=\"" << x << "\" y1=\"" << sy(s.y[i] - s.err[i]) << "\" x2=\"" << x << "\" y2=\""
           << sy(s.y[i] + s.err[i]) << "\" stroke=\"" << color << "\"/>\n";
      }
      os << "<circle cx=\"" << x << "\" cy=\"" << sy(s.y[i]) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = top + 15 + 20.0 * static_cast<double>(k);
    os << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ffgs::cli

#endif  // FFGS_TOOLS_SVG_PLOT_HPP
