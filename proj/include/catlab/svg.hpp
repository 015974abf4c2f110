#ifndef CATLAB_SVG_HPP
#define CATLAB_SVG_HPP

#include <string>
#include <vector>

namespace catlab {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgStyle {
  int width = 760;
  int height = 480;
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Self-contained line chart: axes, tick labels, a legend, and one polyline
/// per series. Output is byte-identical for identical input. Throws
/// std::invalid_argument on empty input or non-finite values.
std::string emit_svg_curves(const std::vector<Series>& series, const SvgStyle& style = {});

}  // namespace catlab

#endif
