#pragma once

#include <string>
#include <vector>

namespace mvcg {

struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points; // (x, y), both positive
};

/// Renders a log-log line chart as a standalone SVG document. Used for the
/// regret-vs-T plots; the annotation string (typically the fitted slope) is
/// drawn in the top-left corner.
std::string svg_loglog_chart(const std::vector<SvgSeries>& series,
                             const std::string& x_label, const std::string& y_label,
                             const std::string& annotation);

} // namespace mvcg
