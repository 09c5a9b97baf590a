#ifndef RAREFAN_SVG_PLOT_HPP
#define RAREFAN_SVG_PLOT_HPP

#include <string>
#include <vector>

namespace rarefan {

// Minimal static line plot; y may be log-scaled when all values are positive.
void write_svg_line_plot(const std::string& path, const std::string& title,
                         const std::vector<double>& x, const std::vector<double>& y,
                         bool log_y = false);

} // namespace rarefan

#endif
