#pragma once

#include <optional>
#include <string>
#include <vector>

namespace htsgd {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> std;        // band half-width; empty means no band
  std::vector<bool> censored;     // optional per-point marker
};

struct PlotStyle {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  std::optional<double> vline;    // dashed vertical marker
  std::string vline_label;
  int width = 720;
  int height = 480;
};

/// Self-contained SVG document: mean polyline plus a shaded +-std band per
/// series, axes with ticks, and a legend.
std::string render_svg(const std::vector<PlotSeries>& series, const PlotStyle& style);
void write_svg(const std::string& path, const std::vector<PlotSeries>& series,
               const PlotStyle& style);

}  // namespace htsgd
