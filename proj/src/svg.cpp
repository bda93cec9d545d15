#include "bubbleuq/svg.hpp"

#include "bubbleuq/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bubbleuq {

namespace {

constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 20, kTop = 20, kBottom = 50;

std::string fmt(double v) {
    // Coordinates only need a few digits.
    return format_double(std::round(v * 100.0) / 100.0);
}

void open(std::ostringstream& s) {
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
      << kW << ' ' << kH << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight << "\" y2=\""
      << kH - kBottom << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kH - kBottom
      << "\" stroke=\"black\"/>\n";
}

void label(std::ostringstream& s, double x, double y, const std::string& text, const char* anchor = "middle") {
    s << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\""
      << anchor << "\">" << text << "</text>\n";
}

} // namespace

std::string histogram_svg(const Histogram& hist, const std::string& x_label) {
    std::ostringstream s;
    open(s);
    const double peak = hist.counts.empty() ? 0.0 : *std::max_element(hist.counts.begin(), hist.counts.end());
    const double plot_w = kW - kLeft - kRight;
    const double plot_h = kH - kTop - kBottom;
    const double bw = hist.bins() ? plot_w / static_cast<double>(hist.bins()) : 0.0;
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        const double h = peak > 0 ? hist.counts[i] / peak * plot_h : 0.0;
        const double x = kLeft + bw * static_cast<double>(i);
        s << "<rect x=\"" << fmt(x + 1) << "\" y=\"" << fmt(kH - kBottom - h) << "\" width=\"" << fmt(bw - 2)
          << "\" height=\"" << fmt(h) << "\" fill=\"steelblue\"/>\n";
        label(s, x + bw / 2, kH - kBottom + 14, format_double(std::round(hist.midpoint(i) * 10) / 10));
    }
    label(s, kLeft + plot_w / 2, kH - 12, x_label + (hist.scale == HistogramScale::Log ? " (log bins)" : ""));
    label(s, kLeft - 6, kTop + 4, format_double(peak), "end");
    label(s, kLeft - 6, kH - kBottom, "0", "end");
    s << "</svg>\n";
    return s.str();
}

std::string trace_svg(std::span<const TracePoint> trace) {
    std::ostringstream s;
    open(s);
    if (trace.empty()) {
        s << "</svg>\n";
        return s.str();
    }
    const double plot_w = kW - kLeft - kRight;
    const double plot_h = kH - kTop - kBottom;
    const double x0 = std::log10(static_cast<double>(trace.front().iterations));
    const double x1 = std::max(std::log10(static_cast<double>(trace.back().iterations)), x0 + 1e-9);
    double lo = 0.0, hi = 0.0;
    for (const TracePoint& t : trace) {
        lo = std::min({lo, t.pre_area, t.pre_perimeter});
        hi = std::max({hi, t.pre_area, t.pre_perimeter});
    }
    if (hi - lo < 1e-9) hi = lo + 1.0;
    const auto px = [&](std::uint64_t it) {
        return kLeft + (std::log10(static_cast<double>(it)) - x0) / (x1 - x0) * plot_w;
    };
    const auto py = [&](double v) { return kTop + (hi - v) / (hi - lo) * plot_h; };
    const auto line = [&](auto field, const char* colour) {
        s << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"";
        for (const TracePoint& t : trace) s << fmt(px(t.iterations)) << ',' << fmt(py(field(t))) << ' ';
        s << "\"/>\n";
    };
    s << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << kW - kRight << "\" y2=\""
      << fmt(py(0)) << "\" stroke=\"grey\" stroke-dasharray=\"4 3\"/>\n";
    line([](const TracePoint& t) { return t.pre_area; }, "steelblue");
    line([](const TracePoint& t) { return t.pre_perimeter; }, "darkorange");
    label(s, kLeft + plot_w / 2, kH - 12, "iterations (log)");
    label(s, kLeft - 6, kTop + 4, format_double(std::round(hi * 100) / 100), "end");
    label(s, kLeft - 6, kH - kBottom, format_double(std::round(lo * 100) / 100), "end");
    label(s, kW - kRight, kTop + 10, "area PRE", "end");
    label(s, kW - kRight, kTop + 24, "perimeter PRE", "end");
    s << "</svg>\n";
    return s.str();
}

} // namespace bubbleuq
