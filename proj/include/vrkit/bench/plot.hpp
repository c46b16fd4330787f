#pragma once

#include <span>
#include <string>
#include <vector>

#include "vrkit/bench/aggregate.hpp"

namespace vrkit::bench {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> median;
  std::vector<double> std;  // shaded median +- std band; may be empty
};

struct PlotOptions {
  std::string title;
  std::string x_label = "effective passes";
  std::string y_label = "full gradient norm";
  bool log_y = true;
  // Step-size sensitivity panels clip y at `cap`.
  bool sensitivity = false;
  double cap = 10.0;
  int width = 720;
  int height = 480;
};

PlotSeries series_from_aggregate(const Aggregate& agg, std::string label, bool objective = false);

// Self-contained SVG with one colour per series. Throws std::invalid_argument
// when there is nothing to draw.
std::string render_svg(std::span<const PlotSeries> series, const PlotOptions& options);

// Fixed palette; series i uses palette_color(i).
std::string palette_color(std::size_t i);

}  // namespace vrkit::bench
