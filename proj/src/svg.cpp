#include "catlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace catlab {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string emit_svg_curves(const std::vector<Series>& series, const SvgStyle& style) {
  if (series.empty()) throw std::invalid_argument("emit_svg_curves: no series");
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const Series& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size())
      throw std::invalid_argument("emit_svg_curves: series sizes are empty or mismatched");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
        throw std::invalid_argument("emit_svg_curves: non-finite value");
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  const double left = 64, right = 24, top = 40, bottom = 48;
  const double pw = style.width - left - right;
  const double ph = style.height - top - bottom;
  const auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
  const auto sy = [&](double y) { return top + ph - (y - y_min) / (y_max - y_min) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
      << style.height << "\" viewBox=\"0 0 " << style.width << " " << style.height << "\">\n";
  out << "<rect width=\"" << style.width << "\" height=\"" << style.height
      << "\" fill=\"white\"/>\n";
  if (!style.title.empty())
    out << "<text x=\"" << style.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << style.title << "</text>\n";

  // frame and ticks
  out << "<g stroke=\"#333\" fill=\"none\" stroke-width=\"1\">\n";
  out << "<path d=\"M" << fmt(left) << " " << fmt(top) << " V" << fmt(top + ph) << " H"
      << fmt(left + pw) << "\"/>\n";
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x_min + (x_max - x_min) * t / 4.0;
    const double yv = y_min + (y_max - y_min) * t / 4.0;
    out << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << fmt(top + ph + 16)
        << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
    out << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(sy(yv) + 4)
        << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
  }
  if (!style.x_label.empty())
    out << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(top + ph + 36)
        << "\" text-anchor=\"middle\">" << style.x_label << "</text>\n";
  if (!style.y_label.empty())
    out << "<text x=\"14\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 14 " << fmt(top + ph / 2) << ")\">" << style.y_label
        << "</text>\n";
  out << "</g>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (i) out << " ";
      out << fmt(sx(series[s].x[i])) << "," << fmt(sy(series[s].y[i]));
    }
    out << "\"/>\n";
    const double ly = top + 8 + 16.0 * static_cast<double>(s);
    out << "<line x1=\"" << fmt(left + pw - 130) << "\" y1=\"" << fmt(ly) << "\" x2=\""
        << fmt(left + pw - 108) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << fmt(left + pw - 102) << "\" y=\"" << fmt(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">" << series[s].name
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace catlab
