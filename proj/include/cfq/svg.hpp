#pragma once

#include <string>
#include <vector>

namespace cfq {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Quick-look line plot. Non-finite samples are dropped; log_y skips
// non-positive values. Plots are diagnostics only and never gate numbers.
void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<SvgSeries>& series, bool log_y = false);

// Row-major grid of values rendered as colored cells, log10 color scale.
void write_heat_map(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<double>& values);

} // namespace cfq
