#pragma once

#include <string>
#include <vector>

#include "cpilab/engine.hpp"

namespace cpilab {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Standalone SVG line chart with axes, ticks and a legend.
std::string svg_line_chart(const std::vector<PlotSeries>& series, const std::string& title,
                           const std::string& x_label, const std::string& y_label);

/// Spectrogram as a grayscale PNG raster embedded in an SVG, delay horizontal,
/// SFG wavelength vertical.
std::string svg_spectrogram(const Spectrogram& spec, const std::string& title);

} // namespace cpilab
