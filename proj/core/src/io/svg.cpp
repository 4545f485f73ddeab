#include "rumor/io/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace rumor::io {

namespace {

constexpr int kMarginLeft = 72;
constexpr int kMarginRight = 150;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 52;
constexpr int kTicks = 5;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-14 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string& s)
{
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

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v)
    {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    // Symmetric padding; a degenerate range is widened around its value.
    Range padded() const
    {
        if (!(lo <= hi)) return {0.0, 1.0};
        if (hi == lo) {
            const double pad = lo == 0.0 ? 1.0 : 0.1 * std::abs(lo);
            return {lo - pad, hi + pad};
        }
        const double pad = 0.05 * (hi - lo);
        return {lo - pad, hi + pad};
    }
};

void validate(std::span<const PlotSeries> series)
{
    if (series.empty()) throw PlotError("no series to plot");
    std::set<std::string> labels;
    for (const auto& s : series) {
        if (s.x.empty()) throw PlotError("series '" + s.label + "' has no points");
        if (s.x.size() != s.y.size()) throw PlotError("series '" + s.label + "' has mismatched x/y lengths");
        if (s.band && (s.band->lower.size() != s.x.size() || s.band->upper.size() != s.x.size())) {
            throw PlotError("series '" + s.label + "' band length differs from its points");
        }
        if (!labels.insert(s.label).second) throw PlotError("duplicate series label '" + s.label + "'");
    }
}

}  // namespace

std::string render_svg(std::span<const PlotSeries> series, const PlotOptions& options)
{
    validate(series);

    Range xr, yr;
    for (const auto& s : series) {
        for (double v : s.x) xr.include(v);
        for (double v : s.y) yr.include(v);
        if (s.band) {
            for (double v : s.band->lower) yr.include(v);
            for (double v : s.band->upper) yr.include(v);
        }
    }
    if (xr.hi == xr.lo) xr = xr.padded();
    yr = yr.padded();

    const double plot_w = options.width - kMarginLeft - kMarginRight;
    const double plot_h = options.height - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double y) { return kMarginTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
       << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height
       << "\" fill=\"white\"/>\n";
    if (!options.title.empty()) {
        os << "<text x=\"" << fixed(kMarginLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
           << "font-family=\"sans-serif\" font-size=\"15\">" << escape(options.title) << "</text>\n";
    }

    // Axes and ticks.
    const double x0 = kMarginLeft, y0 = kMarginTop + plot_h;
    os << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(y0) << "\" x2=\"" << fixed(x0 + plot_w) << "\" y2=\""
       << fixed(y0) << "\"/>\n";
    os << "<line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(kMarginTop) << "\" x2=\"" << fixed(x0) << "\" y2=\""
       << fixed(y0) << "\"/>\n";
    os << "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int k = 0; k <= kTicks; ++k) {
        const double xv = xr.lo + (xr.hi - xr.lo) * k / kTicks;
        const double yv = yr.lo + (yr.hi - yr.lo) * k / kTicks;
        os << "<line x1=\"" << fixed(px(xv)) << "\" y1=\"" << fixed(y0) << "\" x2=\"" << fixed(px(xv)) << "\" y2=\""
           << fixed(y0 + 5) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << fixed(y0 + 18) << "\" text-anchor=\"middle\">"
           << tick_label(xv) << "</text>\n";
        os << "<line x1=\"" << fixed(x0 - 5) << "\" y1=\"" << fixed(py(yv)) << "\" x2=\"" << fixed(x0) << "\" y2=\""
           << fixed(py(yv)) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fixed(x0 - 8) << "\" y=\"" << fixed(py(yv) + 4) << "\" text-anchor=\"end\">"
           << tick_label(yv) << "</text>\n";
    }
    os << "</g>\n";
    os << "<text x=\"" << fixed(kMarginLeft + plot_w / 2) << "\" y=\"" << fixed(options.height - 12.0)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(options.x_label)
       << "</text>\n";
    os << "<text x=\"16\" y=\"" << fixed(kMarginTop + plot_h / 2) << "\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " << fixed(kMarginTop + plot_h / 2)
       << ")\">" << escape(options.y_label) << "</text>\n";

    // Bands first so every line sits on top.
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ser = series[s];
        if (!ser.band) continue;
        os << "<polygon class=\"band\" data-series=\"" << escape(ser.label) << "\" fill=\""
           << kPalette[s % kPalette.size()] << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
        for (std::size_t n = 0; n < ser.x.size(); ++n) {
            os << fixed(px(ser.x[n])) << ',' << fixed(py(ser.band->upper[n])) << ' ';
        }
        for (std::size_t n = ser.x.size(); n-- > 0;) {
            os << fixed(px(ser.x[n])) << ',' << fixed(py(ser.band->lower[n])) << (n ? " " : "");
        }
        os << "\"/>\n";
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ser = series[s];
        os << "<polyline class=\"series\" data-series=\"" << escape(ser.label) << "\" fill=\"none\" stroke=\""
           << kPalette[s % kPalette.size()] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t n = 0; n < ser.x.size(); ++n) {
            os << fixed(px(ser.x[n])) << ',' << fixed(py(ser.y[n])) << (n + 1 < ser.x.size() ? " " : "");
        }
        os << "\"/>\n";
    }

    // Legend.
    os << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double ly = kMarginTop + 12.0 + 18.0 * static_cast<double>(s);
        const double lx = kMarginLeft + plot_w + 12.0;
        os << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 22) << "\" y2=\""
           << fixed(ly) << "\" stroke=\"" << kPalette[s % kPalette.size()] << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << fixed(lx + 28) << "\" y=\"" << fixed(ly + 4) << "\">" << escape(series[s].label)
           << "</text>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace rumor::io
