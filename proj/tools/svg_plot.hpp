#pragma once

// Minimal SVG line plots: stacked panels, each with a frame, zero line,
// axis labels and one polyline per series.

#include <string>
#include <vector>

namespace monosim_cli {

struct Series {
    std::string name;
    std::vector<double> y;
};

struct Panel {
    std::string title;
    std::string y_label;
    std::vector<Series> series;
};

/// All series share the x axis x_k = k * dx.
std::string render_svg(const std::vector<Panel>& panels, double dx, const std::string& x_label);

}  // namespace monosim_cli
