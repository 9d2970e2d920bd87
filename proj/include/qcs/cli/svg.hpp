#pragma once

#include <string>
#include <utility>
#include <vector>

// Standalone SVG line charts: inline styling, no scripts, no external fonts.
namespace qcs::cli {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 720;
    int height = 480;
};

// Throws InputError when there is nothing to draw or a log axis meets a
// non-positive value.
std::string render_line_chart(const std::vector<Series>& series, const ChartSpec& spec);

}  // namespace qcs::cli
