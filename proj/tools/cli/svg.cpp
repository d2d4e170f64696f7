#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace jst::cli {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 80, kRight = 780, kTop = 50, kBottom = 440;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<ChartSeries>& series) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (double x : s.x) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
    }
    for (double y : s.y) {
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    y0 = std::min(y0, s.reference);
    y1 = std::max(y1, s.reference);
  }
  if (!(x0 > 0) || !std::isfinite(x1)) x0 = 1, x1 = 10;
  if (x1 <= x0) x1 = x0 * 10;
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  const double pad = std::max(0.02, 0.1 * (y1 - y0));
  y0 = std::max(0.0, y0 - pad);
  y1 = std::min(1.0, y1 + pad);
  if (y1 <= y0) y1 = y0 + 0.1;

  const double lx0 = std::log10(x0), lx1 = std::log10(x1);
  auto px = [&](double x) { return kLeft + (std::log10(x) - lx0) / (lx1 - lx0) * (kRight - kLeft); };
  auto py = [&](double y) { return kBottom - (y - y0) / (y1 - y0) * (kBottom - kTop); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + fmt("%.0f", kWidth) + " " +
         fmt("%.0f", kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">" + escape(title) + "</text>\n";
  out += "<rect x=\"" + fmt("%.0f", kLeft) + "\" y=\"" + fmt("%.0f", kTop) + "\" width=\"" +
         fmt("%.0f", kRight - kLeft) + "\" height=\"" + fmt("%.0f", kBottom - kTop) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  // x ticks at powers of ten inside the range, plus both ends
  std::vector<double> xticks{x0};
  for (double p = std::ceil(lx0); p <= std::floor(lx1); p += 1) {
    const double t = std::pow(10.0, p);
    if (t > x0 * 1.05 && t < x1 / 1.05) xticks.push_back(t);
  }
  xticks.push_back(x1);
  for (double t : xticks) {
    const double X = px(t);
    out += "<line x1=\"" + fmt("%.2f", X) + "\" y1=\"" + fmt("%.0f", kBottom) + "\" x2=\"" + fmt("%.2f", X) +
           "\" y2=\"" + fmt("%.0f", kBottom + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt("%.2f", X) + "\" y=\"" + fmt("%.0f", kBottom + 20) + "\" text-anchor=\"middle\">" +
           fmt("%.0f", t) + "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double v = y0 + (y1 - y0) * i / 5, Y = py(v);
    out += "<line x1=\"" + fmt("%.0f", kLeft - 5) + "\" y1=\"" + fmt("%.2f", Y) + "\" x2=\"" + fmt("%.0f", kRight) +
           "\" y2=\"" + fmt("%.2f", Y) + "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + fmt("%.0f", kLeft - 8) + "\" y=\"" + fmt("%.2f", Y + 4) + "\" text-anchor=\"end\">" +
           fmt("%.3f", v) + "</text>\n";
  }
  out += "<text x=\"430\" y=\"475\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
  out += "<text x=\"20\" y=\"245\" text-anchor=\"middle\" transform=\"rotate(-90 20 245)\">" + escape(y_label) +
         "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const std::string& colour = kSeriesColours[k % kSeriesColours.size()];
    out += "<polyline fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (i) out += ' ';
      out += fmt("%.2f", px(s.x[i])) + "," + fmt("%.2f", py(std::clamp(s.y[i], y0, y1)));
    }
    out += "\"/>\n";
    const double R = py(std::clamp(s.reference, y0, y1));
    out += "<line x1=\"" + fmt("%.0f", kLeft) + "\" y1=\"" + fmt("%.2f", R) + "\" x2=\"" + fmt("%.0f", kRight) +
           "\" y2=\"" + fmt("%.2f", R) + "\" stroke=\"" + colour + "\" stroke-dasharray=\"6 4\"/>\n";
    const double ly = kTop + 18 + 18 * static_cast<double>(k);
    out += "<line x1=\"600\" y1=\"" + fmt("%.0f", ly - 4) + "\" x2=\"625\" y2=\"" + fmt("%.0f", ly - 4) +
           "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"632\" y=\"" + fmt("%.0f", ly) + "\">" + escape(s.name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace jst::cli
