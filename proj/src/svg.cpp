#include "mvcg/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mvcg {

namespace {

constexpr double kWidth = 640.0, kHeight = 440.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 30.0, kBottom = 50.0;

const char* kColors[] = {"#1f6fb2", "#c03a2b", "#3a8a3d", "#8b5aa6", "#b2771f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

std::string svg_loglog_chart(const std::vector<SvgSeries>& series,
                             const std::string& x_label, const std::string& y_label,
                             const std::string& annotation) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!(x > 0.0) || !(y > 0.0))
                throw std::invalid_argument("log-log chart needs positive coordinates");
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmin > xmax)
        throw std::invalid_argument("chart has no points");
    // Pad degenerate ranges so a flat series still renders.
    if (xmin == xmax) {
        xmin /= 2.0;
        xmax *= 2.0;
    }
    if (ymin == ymax) {
        ymin /= 2.0;
        ymax *= 2.0;
    }

    const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
    const double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
    const auto px = [&](double x) {
        return kLeft + (std::log10(x) - lx0) / (lx1 - lx0) * (kWidth - kLeft - kRight);
    };
    const auto py = [&](double y) {
        return kHeight - kBottom -
               (std::log10(y) - ly0) / (ly1 - ly0) * (kHeight - kTop - kBottom);
    };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
           "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
           fmt(kHeight) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes.
    out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kHeight - kBottom) + "\" x2=\"" +
           fmt(kWidth - kRight) + "\" y2=\"" + fmt(kHeight - kBottom) +
           "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) +
           "\" y2=\"" + fmt(kHeight - kBottom) + "\" stroke=\"black\"/>\n";

    // Decade ticks.
    for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1));
         ++e) {
        const double x = px(std::pow(10.0, e));
        out += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(kHeight - kBottom) + "\" x2=\"" +
               fmt(x) + "\" y2=\"" + fmt(kHeight - kBottom + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(kHeight - kBottom + 20) +
               "\" font-size=\"12\" text-anchor=\"middle\">1e" + std::to_string(e) +
               "</text>\n";
    }
    for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1));
         ++e) {
        const double y = py(std::pow(10.0, e));
        out += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" +
               fmt(kLeft) + "\" y2=\"" + fmt(y) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(y + 4) +
               "\" font-size=\"12\" text-anchor=\"end\">1e" + std::to_string(e) +
               "</text>\n";
    }

    out += "<text x=\"" + fmt((kLeft + kWidth - kRight) / 2) + "\" y=\"" +
           fmt(kHeight - 10) + "\" font-size=\"13\" text-anchor=\"middle\">" + x_label +
           "</text>\n";
    out += "<text x=\"15\" y=\"" + fmt((kTop + kHeight - kBottom) / 2) +
           "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
           fmt((kTop + kHeight - kBottom) / 2) + ")\">" + y_label + "</text>\n";

    int color = 0;
    double legend_y = kTop + 14.0;
    for (const auto& s : series) {
        const char* c = kColors[color % 5];
        std::string path = "<polyline fill=\"none\" stroke=\"";
        path += c;
        path += "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.points)
            path += fmt(px(x)) + "," + fmt(py(y)) + " ";
        path += "\"/>\n";
        out += path;
        for (const auto& [x, y] : s.points)
            out += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) +
                   "\" r=\"2.5\" fill=\"" + c + "\"/>\n";
        if (!s.label.empty()) {
            out += "<text x=\"" + fmt(kWidth - kRight - 150) + "\" y=\"" + fmt(legend_y) +
                   "\" font-size=\"12\" fill=\"" + c + "\">" + s.label + "</text>\n";
            legend_y += 16.0;
        }
        ++color;
    }

    if (!annotation.empty())
        out += "<text x=\"" + fmt(kLeft + 10) + "\" y=\"" + fmt(kTop + 5) +
               "\" font-size=\"13\">" + annotation + "</text>\n";
    out += "</svg>\n";
    return out;
}

} // namespace mvcg
