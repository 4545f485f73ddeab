#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rumor::io {

class PlotError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PlotBand {
    std::vector<double> lower;
    std::vector<double> upper;
};

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::optional<PlotBand> band;  ///< shaded polygon drawn under the line
};

struct PlotOptions {
    std::string title;
    std::string x_label = "t";
    std::string y_label;
    int width = 720;
    int height = 440;
};

/// Standalone SVG line chart: axes with ticks, labels, a legend, one polyline per
/// series and an optional band polygon. Output bytes depend only on the input.
///
/// Throws PlotError for no series, a series without points, mismatched lengths,
/// or two series sharing a label.
std::string render_svg(std::span<const PlotSeries> series, const PlotOptions& options);

}  // namespace rumor::io
