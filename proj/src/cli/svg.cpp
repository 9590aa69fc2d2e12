#include "hfgsim/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hfgsim::cli {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 160;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& xLabel,
                           const std::string& yLabel,
                           const std::vector<double>& times,
                           const std::vector<ChartSeries>& series) {
    double yMin = 0.0;
    double yMax = 0.0;
    bool any = false;
    for (const ChartSeries& s : series) {
        for (const auto& v : s.values) {
            if (!v.has_value()) continue;
            if (!any) {
                yMin = yMax = *v;
                any = true;
            } else {
                yMin = std::min(yMin, *v);
                yMax = std::max(yMax, *v);
            }
        }
    }
    if (!any) {
        yMin = 0.0;
        yMax = 1.0;
    }
    if (yMax - yMin < 1e-30) yMax = yMin + 1.0;
    const double xMin = times.empty() ? 0.0 : times.front();
    const double xMax = times.empty() || times.back() == xMin ? xMin + 1.0 : times.back();

    const double plotW = kWidth - kMarginLeft - kMarginRight;
    const double plotH = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double t) { return kMarginLeft + (t - xMin) / (xMax - xMin) * plotW; };
    auto py = [&](double v) {
        return kMarginTop + (yMax - v) / (yMax - yMin) * plotH;
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // axes
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
        << kMarginLeft << "\" y2=\"" << kMarginTop + plotH
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plotH
        << "\" x2=\"" << kMarginLeft + plotW << "\" y2=\"" << kMarginTop + plotH
        << "\" stroke=\"black\"/>\n";

    // ticks
    for (int i = 0; i <= 5; ++i) {
        const double tx = xMin + (xMax - xMin) * i / 5.0;
        const double ty = yMin + (yMax - yMin) * i / 5.0;
        out << "<line x1=\"" << px(tx) << "\" y1=\"" << kMarginTop + plotH << "\" x2=\""
            << px(tx) << "\" y2=\"" << kMarginTop + plotH + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(tx) << "\" y=\"" << kMarginTop + plotH + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << short_number(tx) << "</text>\n";
        out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << py(ty) << "\" x2=\""
            << kMarginLeft << "\" y2=\"" << py(ty) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py(ty) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << short_number(ty) << "</text>\n";
    }
    out << "<text x=\"" << kMarginLeft + plotW / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << xLabel << "</text>\n";
    out << "<text x=\"18\" y=\"" << kMarginTop + plotH / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 18 " << kMarginTop + plotH / 2 << ")\">" << yLabel
        << "</text>\n";

    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::ostringstream points;
        bool open = false;
        auto flush = [&]() {
            if (open) {
                out << "<polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"1.5\" points=\"" << points.str() << "\"/>\n";
            }
            points.str("");
            open = false;
        };
        for (size_t i = 0; i < times.size() && i < series[s].values.size(); ++i) {
            const auto& v = series[s].values[i];
            if (!v.has_value()) {
                flush();
                continue;
            }
            points << px(times[i]) << ',' << py(*v) << ' ';
            open = true;
        }
        flush();

        const double ly = kMarginTop + 16.0 * static_cast<double>(s);
        out << "<line x1=\"" << kMarginLeft + plotW + 10 << "\" y1=\"" << ly
            << "\" x2=\"" << kMarginLeft + plotW + 30 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kMarginLeft + plotW + 36 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].label
            << "</text>\n";
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace hfgsim::cli
