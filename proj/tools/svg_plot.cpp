#include "svg_plot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace monosim_cli {

namespace {

constexpr double kWidth = 900.0;
constexpr double kPanelHeight = 300.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 30.0, kBottom = 45.0;

constexpr std::array<const char*, 8> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v, int digits = 2) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, digits);
    return std::string(buf.data(), res.ptr);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const std::vector<Panel>& panels, double dx, const std::string& x_label) {
    const double height = kPanelHeight * static_cast<double>(panels.size());
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth, 0) + "\" height=\"" +
                      fixed(height, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const auto& panel = panels[p];
        const double top = static_cast<double>(p) * kPanelHeight + kTop;
        const double plot_h = kPanelHeight - kTop - kBottom;
        const double plot_w = kWidth - kLeft - kRight;

        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        std::size_t len = 0;
        for (const auto& s : panel.series) {
            len = std::max(len, s.y.size());
            for (double v : s.y) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        if (!(lo < hi)) {
            lo = (std::isfinite(lo) ? lo : 0.0) - 1.0;
            hi = lo + 2.0;
        }
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
        const double x_max = dx * static_cast<double>(len > 1 ? len - 1 : 1);
        auto px = [&](double x) { return kLeft + plot_w * x / x_max; };
        auto py = [&](double y) { return top + plot_h * (hi - y) / (hi - lo); };

        svg += "<g>\n<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(plot_w) +
               "\" height=\"" + fixed(plot_h) + "\" fill=\"none\" stroke=\"#444\"/>\n";
        if (lo < 0.0 && hi > 0.0) {
            svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(py(0.0)) + "\" x2=\"" + fixed(kLeft + plot_w) +
                   "\" y2=\"" + fixed(py(0.0)) + "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
        }
        svg += "<text x=\"" + fixed(kLeft) + "\" y=\"" + fixed(top - 10.0) + "\">" + escape(panel.title) + "</text>\n";
        svg += "<text x=\"" + fixed(kLeft - 8.0) + "\" y=\"" + fixed(top + 4.0) + "\" text-anchor=\"end\">" +
               fixed(hi) + "</text>\n";
        svg += "<text x=\"" + fixed(kLeft - 8.0) + "\" y=\"" + fixed(top + plot_h) + "\" text-anchor=\"end\">" +
               fixed(lo) + "</text>\n";
        svg += "<text x=\"" + fixed(kLeft) + "\" y=\"" + fixed(top + plot_h + 16.0) + "\">0</text>\n";
        svg += "<text x=\"" + fixed(kLeft + plot_w) + "\" y=\"" + fixed(top + plot_h + 16.0) +
               "\" text-anchor=\"end\">" + fixed(x_max) + "</text>\n";
        svg += "<text x=\"" + fixed(kLeft + 0.5 * plot_w) + "\" y=\"" + fixed(top + plot_h + 32.0) +
               "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
        svg += "<text transform=\"translate(" + fixed(18.0) + "," + fixed(top + 0.5 * plot_h) +
               ") rotate(-90)\" text-anchor=\"middle\">" + escape(panel.y_label) + "</text>\n";

        for (std::size_t s = 0; s < panel.series.size(); ++s) {
            const auto& series = panel.series[s];
            svg += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" +
                   std::string(kColors[s % kColors.size()]) + "\" points=\"";
            for (std::size_t k = 0; k < series.y.size(); ++k) {
                if (k) svg += ' ';
                svg += fixed(px(dx * static_cast<double>(k))) + "," + fixed(py(series.y[k]));
            }
            svg += "\"><title>" + escape(series.name) + "</title></polyline>\n";
        }
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace monosim_cli
