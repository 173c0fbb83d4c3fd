#ifndef METROLOGY_SVG_HPP
#define METROLOGY_SVG_HPP

#include <span>
#include <string>
#include <vector>

namespace metrology {

/// One polyline/scatter series for the SVG plotters.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Self-contained SVG line plot. log_y switches the y axis to log10; points
/// with non-finite or (for log_y) nonpositive y are skipped.
std::string render_line_plot(std::span<const PlotSeries> series, const std::string& title,
                             const std::string& x_label, const std::string& y_label, bool log_y);

/// Scatter variant with vertical error bars (bar length may be zero).
std::string render_scatter_plot(std::span<const PlotSeries> series,
                                std::span<const std::vector<double>> y_errors,
                                const std::string& title, const std::string& x_label,
                                const std::string& y_label);

}  // namespace metrology

#endif
