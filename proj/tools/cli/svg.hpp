#pragma once

#include <string>
#include <vector>

namespace jst::cli {

struct ChartSeries {
  std::string name;
  std::vector<double> x, y;
  double reference = 0;  // drawn as a dashed horizontal line in the series colour
};

/// Colours assigned to series in order, wrapping around.
inline const std::vector<std::string> kSeriesColours = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

/// Line chart on a fixed 800x500 viewBox with a log-scaled x axis.
std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<ChartSeries>& series);

}  // namespace jst::cli
