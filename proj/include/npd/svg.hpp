#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "npd/errors.hpp"

namespace npd {

/// Minimal hand-rolled SVG output. CSV is the canonical artifact; these plots
/// exist so a sweep can be eyeballed without external tooling.

namespace detail {

inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace detail

/// Heat map over an integer (x, y) grid. Cell values: >= 0.5 green, < 0.5 red;
/// NaN cells are gray. Used for phase-transition plots (holds / fails / n.a.).
inline void svg_heatmap(const std::string& path, const std::string& title,
                        const std::vector<int>& xs, const std::vector<int>& ys,
                        const Eigen::MatrixXd& cells) {
  const int margin = 60, cell = 14;
  const int w = margin * 2 + cell * static_cast<int>(xs.size());
  const int h = margin * 2 + cell * static_cast<int>(ys.size());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\">\n";
  out << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n";
  for (std::size_t xi = 0; xi < xs.size(); ++xi) {
    for (std::size_t yi = 0; yi < ys.size(); ++yi) {
      const double v = cells(static_cast<Eigen::Index>(yi), static_cast<Eigen::Index>(xi));
      const char* color = std::isnan(v) ? "#cccccc" : (v >= 0.5 ? "#2a9d3e" : "#d03030");
      const int px = margin + static_cast<int>(xi) * cell;
      const int py = h - margin - static_cast<int>(yi + 1) * cell;
      out << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << cell - 1 << "\" height=\""
          << cell - 1 << "\" fill=\"" << color << "\"/>\n";
    }
  }
  // sparse axis labels
  for (std::size_t xi = 0; xi < xs.size(); xi += (xs.size() > 20 ? 5 : 1)) {
    out << "<text x=\"" << margin + static_cast<int>(xi) * cell + cell / 2 << "\" y=\""
        << h - margin + 16 << "\" text-anchor=\"middle\" font-size=\"9\">" << xs[xi]
        << "</text>\n";
  }
  for (std::size_t yi = 0; yi < ys.size(); yi += (ys.size() > 20 ? 5 : 1)) {
    out << "<text x=\"" << margin - 6 << "\" y=\""
        << h - margin - static_cast<int>(yi) * cell - cell / 2 + 4
        << "\" text-anchor=\"end\" font-size=\"9\">" << ys[yi] << "</text>\n";
  }
  out << "</svg>\n";
}

struct SvgSeries {
  std::string name;
  std::vector<double> x, y;
};

/// Line plot with a shared x axis; y is clamped to the data range.
inline void svg_lineplot(const std::string& path, const std::string& title,
                         const std::string& x_label, const std::vector<SvgSeries>& series) {
  const int w = 640, h = 420, margin = 60;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      if (first) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        first = false;
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (w - 2 * margin); };
  const auto py = [&](double y) {
    return h - margin - (y - ymin) / (ymax - ymin) * (h - 2 * margin);
  };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\">\n";
  out << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << w - 2 * margin
      << "\" height=\"" << h - 2 * margin << "\" fill=\"none\" stroke=\"#333\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"" << h - 12
      << "\" text-anchor=\"middle\" font-size=\"11\">" << x_label << "</text>\n";
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double xv = xmin + t * (xmax - xmin);
    const double yv = ymin + t * (ymax - ymin);
    out << "<text x=\"" << px(xv) << "\" y=\"" << h - margin + 16
        << "\" text-anchor=\"middle\" font-size=\"9\">" << detail::fmt_num(xv) << "</text>\n";
    out << "<text x=\"" << margin - 6 << "\" y=\"" << py(yv) + 3
        << "\" text-anchor=\"end\" font-size=\"9\">" << detail::fmt_num(yv) << "</text>\n";
  }
  int ci = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[ci % 4] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      out << px(s.x[i]) << "," << py(s.y[i]) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << w - margin + 4 << "\" y=\"" << margin + 14 * ci + 10
        << "\" font-size=\"10\" fill=\"" << colors[ci % 4] << "\">" << s.name << "</text>\n";
    ++ci;
  }
  out << "</svg>\n";
}

}  // namespace npd
