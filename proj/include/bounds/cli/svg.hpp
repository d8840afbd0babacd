#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bounds/core.hpp"

namespace bounds::cli {

struct PlotSeries {
  std::string name;
  Vector x;
  Vector y;
};

/// Minimal line plot: axes with tick labels, optional log10 y axis, legend.
/// On a log axis non-positive and non-finite points break the line.
struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  int width = 800;
  int height = 480;
  std::vector<PlotSeries> series;
};

void write_svg(const LinePlot& plot, std::ostream& out);
void write_svg_file(const LinePlot& plot, const std::string& path);

}  // namespace bounds::cli
