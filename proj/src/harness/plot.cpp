#include "htsgd/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "htsgd/core/errors.hpp"
#include "htsgd/harness/csv.hpp"

namespace htsgd {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
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

struct Axis {
  double lo, hi;
  bool log;
  double px_lo, px_hi;

  double map(double v) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double t = ((log ? std::log10(v) : v) - a) / (b - a);
    return px_lo + t * (px_hi - px_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (int e = int(std::floor(std::log10(lo))); e <= int(std::ceil(std::log10(hi))); ++e) {
        const double v = std::pow(10.0, e);
        if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9)) out.push_back(v);
      }
      if (out.size() < 2) out = {lo, hi};
      return out;
    }
    const double span = hi - lo;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
      out.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    }
    return out;
  }
};

void widen(double& lo, double& hi, bool log) {
  if (!(lo < hi)) {
    if (log) {
      lo /= 2.0;
      hi *= 2.0;
    } else {
      const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    }
  }
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const PlotStyle& style) {
  require(!series.empty(), "render_svg: no series");
  constexpr double inf = std::numeric_limits<double>::infinity();
  double xlo = inf, xhi = -inf, ylo = inf, yhi = -inf;
  auto usable = [&](double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); };
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.x[i], style.logx)) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      const double sd = i < s.std.size() ? s.std[i] : 0.0;
      for (double y : {s.mean[i], s.mean[i] - sd, s.mean[i] + sd}) {
        if (!usable(y, style.logy)) continue;
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
      }
    }
  }
  if (style.vline && usable(*style.vline, style.logx)) {
    xlo = std::min(xlo, *style.vline);
    xhi = std::max(xhi, *style.vline);
  }
  if (!std::isfinite(xlo)) xlo = style.logx ? 1.0 : 0.0, xhi = xlo;
  if (!std::isfinite(ylo)) ylo = style.logy ? 1.0 : 0.0, yhi = ylo;
  widen(xlo, xhi, style.logx);
  widen(ylo, yhi, style.logy);

  const double W = style.width, H = style.height;
  const double left = 80, right = 180, top = 40, bottom = 60;
  const Axis ax{xlo, xhi, style.logx, left, W - right};
  const Axis ay{ylo, yhi, style.logy, H - bottom, top};

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(W) + "\" height=\"" + fmt(H) +
         "\" viewBox=\"0 0 " + fmt(W) + " " + fmt(H) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(style.title) + "</text>\n";

  // axes and grid
  out += "<g stroke=\"#ddd\" stroke-width=\"1\">\n";
  for (double t : ax.ticks()) {
    const double px = ax.map(t);
    out += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(px) + "\" y2=\"" +
           fmt(H - bottom) + "\"/>\n";
  }
  for (double t : ay.ticks()) {
    const double py = ay.map(t);
    out += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(W - right) +
           "\" y2=\"" + fmt(py) + "\"/>\n";
  }
  out += "</g>\n";
  out += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(W - right - left) +
         "\" height=\"" + fmt(H - bottom - top) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ax.ticks()) {
    out += "<text x=\"" + fmt(ax.map(t)) + "\" y=\"" + fmt(H - bottom + 16) +
           "\" text-anchor=\"middle\">" + tick_label(t) + "</text>\n";
  }
  for (double t : ay.ticks()) {
    out += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(ay.map(t) + 4) +
           "\" text-anchor=\"end\">" + tick_label(t) + "</text>\n";
  }
  out += "<text x=\"" + fmt((left + W - right) / 2) + "\" y=\"" + fmt(H - 18) +
         "\" text-anchor=\"middle\">" + escape(style.xlabel) + "</text>\n";
  out += "<text transform=\"translate(18," + fmt((top + H - bottom) / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(style.ylabel) + "</text>\n";

  auto clampy = [&](double y) {
    if (style.logy && !(y > 0.0)) y = ylo;
    return std::clamp(y, ylo, yhi);
  };

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (usable(s.x[i], style.logx) && std::isfinite(s.mean[i])) idx.push_back(i);
    }
    if (idx.empty()) continue;
    if (!s.std.empty()) {
      std::string pts;
      for (std::size_t i : idx) {
        pts += fmt(ax.map(s.x[i])) + "," + fmt(ay.map(clampy(s.mean[i] + s.std[i]))) + " ";
      }
      for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
        pts += fmt(ax.map(s.x[*it])) + "," + fmt(ay.map(clampy(s.mean[*it] - s.std[*it]))) + " ";
      }
      out += "<polygon points=\"" + pts + "\" fill=\"" + color +
             "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    }
    std::string pts;
    for (std::size_t i : idx) {
      pts += fmt(ax.map(s.x[i])) + "," + fmt(ay.map(clampy(s.mean[i]))) + " ";
    }
    out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.8\"/>\n";
    for (std::size_t i : idx) {
      if (i < s.censored.size() && s.censored[i]) {
        out += "<circle cx=\"" + fmt(ax.map(s.x[i])) + "\" cy=\"" + fmt(ay.map(clampy(s.mean[i]))) +
               "\" r=\"4\" fill=\"white\" stroke=\"" + color + "\"/>\n";
      }
    }
    const double ly = top + 16 + 18 * double(k);
    out += "<line x1=\"" + fmt(W - right + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
           fmt(W - right + 36) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"3\"/>\n";
    out += "<text x=\"" + fmt(W - right + 42) + "\" y=\"" + fmt(ly + 4) + "\">" + escape(s.label) +
           "</text>\n";
  }

  if (style.vline && usable(*style.vline, style.logx)) {
    const double px = ax.map(*style.vline);
    out += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(px) + "\" y2=\"" +
           fmt(H - bottom) + "\" stroke=\"red\" stroke-dasharray=\"6,4\" stroke-width=\"1.5\"/>\n";
    if (!style.vline_label.empty()) {
      out += "<text x=\"" + fmt(px + 4) + "\" y=\"" + fmt(top + 14) + "\" fill=\"red\">" +
             escape(style.vline_label) + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

void write_svg(const std::string& path, const std::vector<PlotSeries>& series,
               const PlotStyle& style) {
  write_text(path, render_svg(series, style));
}

}  // namespace htsgd
