#pragma once

#include <optional>
#include <string>
#include <vector>

#include "horolab/errors.hpp"

namespace horolab {

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> yerr; // optional, empty or same length as y
    std::string label;
};

struct FitLine {
    double slope = 0.0;
    double intercept = 0.0; // in the plotted (possibly log) coordinates
};

struct PlotStyle {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool logx = false;
    bool logy = false;
    std::optional<FitLine> fit;
};

/// Deterministic SVG 1.1 scatter/line plot with error bars. Nonpositive
/// values are dropped on log axes. Throws EmptySeries when nothing is
/// plottable.
std::string emit_plot(const std::vector<PlotSeries>& series, const PlotStyle& style);

} // namespace horolab
