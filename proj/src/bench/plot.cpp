#include "vrkit/bench/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace vrkit::bench {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1, 2 or 5 times a power of ten, at least span / 5.
double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

struct Frame {
  double x0, x1, y0, y1;  // data range (y in transformed space)
  double left, top, right, bottom;
  bool log_y;

  double tx(double x) const { return left + (x - x0) / (x1 - x0) * (right - left); }
  double ty(double y) const {
    const double v = log_y ? std::log10(y) : y;
    return bottom - (v - y0) / (y1 - y0) * (bottom - top);
  }
};

}  // namespace

std::string palette_color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

PlotSeries series_from_aggregate(const Aggregate& agg, std::string label, bool objective) {
  PlotSeries s;
  s.label = std::move(label);
  for (const auto& r : agg.rows) {
    s.x.push_back(r.pass);
    s.median.push_back(objective ? r.objective_median : r.grad_norm_median);
    s.std.push_back(objective ? r.objective_std : r.grad_norm_std);
  }
  return s;
}

std::string render_svg(std::span<const PlotSeries> series, const PlotOptions& opt) {
  const double cap = opt.sensitivity ? opt.cap : std::numeric_limits<double>::infinity();
  auto usable = [&](double y) { return std::isfinite(y) && (!opt.log_y || y > 0.0); };
  auto clip = [&](double y) { return std::isinf(y) && y > 0 ? cap : std::min(y, cap); };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  std::size_t points = 0;
  for (const auto& s : series) {
    if (s.x.size() != s.median.size() || (!s.std.empty() && s.std.size() != s.x.size())) {
      throw std::invalid_argument("plot: series '" + s.label + "' has mismatched lengths");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = clip(s.median[i]);
      if (!usable(y) || !std::isfinite(s.x[i])) continue;
      const double v = opt.log_y ? std::log10(y) : y;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
      ++points;
    }
  }
  if (points == 0) throw std::invalid_argument("plot: nothing to draw");
  if (x1 == x0) x1 = x0 + 1.0;
  if (opt.log_y) {
    y0 = std::floor(y0);
    y1 = std::ceil(y1);
  }
  if (y1 <= y0) y1 = y0 + 1.0;

  const Frame f{x0, x1, y0, y1, 70.0, 40.0, opt.width - 170.0, opt.height - 50.0, opt.log_y};
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) +
                    "\" height=\"" + std::to_string(opt.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    svg += "<text x=\"" + fmt((f.left + f.right) / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(opt.title) + "</text>\n";
  }

  // Axes and ticks.
  svg += "<g stroke=\"#444\" fill=\"none\">\n<rect x=\"" + fmt(f.left) + "\" y=\"" + fmt(f.top) + "\" width=\"" +
         fmt(f.right - f.left) + "\" height=\"" + fmt(f.bottom - f.top) + "\"/>\n</g>\n";
  svg += "<g fill=\"#222\">\n";
  const double xs = nice_step(x1 - x0);
  for (double x = std::ceil(x0 / xs) * xs; x <= x1 + 1e-9 * xs; x += xs) {
    svg += "<text x=\"" + fmt(f.tx(x)) + "\" y=\"" + fmt(f.bottom + 16) + "\" text-anchor=\"middle\">" +
           tick_label(x) + "</text>\n";
  }
  if (opt.log_y) {
    for (double e = y0; e <= y1 + 1e-9; e += 1.0) {
      const double y = f.bottom - (e - y0) / (y1 - y0) * (f.bottom - f.top);
      svg += "<text x=\"" + fmt(f.left - 6) + "\" y=\"" + fmt(y + 4) + "\" text-anchor=\"end\">1e" +
             tick_label(e) + "</text>\n";
    }
  } else {
    const double ys = nice_step(y1 - y0);
    for (double v = std::ceil(y0 / ys) * ys; v <= y1 + 1e-9 * ys; v += ys) {
      const double y = f.bottom - (v - y0) / (y1 - y0) * (f.bottom - f.top);
      svg += "<text x=\"" + fmt(f.left - 6) + "\" y=\"" + fmt(y + 4) + "\" text-anchor=\"end\">" +
             tick_label(v) + "</text>\n";
    }
  }
  svg += "<text x=\"" + fmt((f.left + f.right) / 2) + "\" y=\"" + fmt(opt.height - 12.0) +
         "\" text-anchor=\"middle\">" + escape(opt.x_label) + "</text>\n";
  svg += "<text transform=\"translate(16 " + fmt((f.top + f.bottom) / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(opt.y_label) + "</text>\n</g>\n";

  const double y_floor = opt.log_y ? std::pow(10.0, y0) : y0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const std::string color = palette_color(k);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (usable(clip(s.median[i])) && std::isfinite(s.x[i])) idx.push_back(i);
    }
    if (idx.empty()) continue;
    svg += "<g class=\"series\" data-label=\"" + escape(s.label) + "\">\n";
    if (!s.std.empty()) {
      std::string upper, lower;
      for (std::size_t i : idx) {
        const double m = clip(s.median[i]);
        const double sd = std::isfinite(s.std[i]) ? s.std[i] : 0.0;
        const double hi = std::min(m + sd, opt.sensitivity ? cap : m + sd);
        const double lo = std::max(m - sd, y_floor);
        upper += fmt(f.tx(s.x[i])) + "," + fmt(f.ty(hi)) + " ";
        lower = fmt(f.tx(s.x[i])) + "," + fmt(f.ty(std::min(lo, m))) + " " + lower;
      }
      svg += "<polygon points=\"" + upper + lower + "\" fill=\"" + color +
             "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    }
    std::string pts;
    for (std::size_t i : idx) pts += fmt(f.tx(s.x[i])) + "," + fmt(f.ty(clip(s.median[i]))) + " ";
    svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.8\"/>\n";
    svg += "</g>\n";
    const double ly = f.top + 14.0 + 18.0 * static_cast<double>(k);
    svg += "<line x1=\"" + fmt(f.right + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(f.right + 36) + "\" y2=\"" +
           fmt(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(f.right + 42) + "\" y=\"" + fmt(ly + 4) + "\">" + escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace vrkit::bench
