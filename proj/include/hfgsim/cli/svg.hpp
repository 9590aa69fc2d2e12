#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hfgsim::cli {

struct ChartSeries {
    std::string label;
    std::vector<std::optional<double>> values;  // aligned to the time axis
};

/// Minimal hand-emitted SVG line chart: axes, tick labels, a legend, and one
/// polyline per series. Gaps (unset values) break the polyline.
std::string line_chart_svg(const std::string& title, const std::string& xLabel,
                           const std::string& yLabel,
                           const std::vector<double>& times,
                           const std::vector<ChartSeries>& series);

}  // namespace hfgsim::cli
