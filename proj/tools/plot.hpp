#pragma once

#include <string>
#include <vector>

namespace tgt::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct Figure {
  std::string axis;  // shared x column name
  std::vector<Series> series;
};

struct Style {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 720;
  int height = 480;
};

/// Parses either the simulate CSV (one series per algorithm and design kind,
/// y = rate) or a wide CSV whose first column is the axis and every other
/// column a series. Throws InvalidInput on malformed or empty input.
Figure read_csv_figure(const std::string& text, bool dashed = false);

/// Appends `extra`'s series; the axis names must agree.
void merge(Figure& into, const Figure& extra);

/// Deterministic SVG with one polyline per series and legend in input order.
std::string render_svg(const Figure& fig, const Style& style);

}  // namespace tgt::plot
