#pragma once

#include <string>
#include <vector>

namespace dgbo {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    bool markers_only = false;  // scatter instead of polyline
};

// Standalone SVG document. Points that are non-finite, or nonpositive on a
// log axis, are skipped.
std::string render_chart(const ChartSpec& spec, const std::vector<Series>& series);

}  // namespace dgbo
