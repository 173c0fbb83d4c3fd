#ifndef METROLOGY_GRID_HPP
#define METROLOGY_GRID_HPP

#include <span>
#include <vector>

namespace metrology {

/// Uniform discretization of a hypothesis interval with trapezoid quadrature
/// weights. weights sum to (upper - lower); end weights are half-sized.
struct HypothesisGrid1D {
    double lower = 0.0;
    double upper = 1.0;
    int points = 2;
    std::vector<double> values;
    std::vector<double> weights;

    double spacing() const { return (upper - lower) / static_cast<double>(points - 1); }
};

/// Builds a grid on [lower, upper]. Requires lower < upper and points >= 2.
HypothesisGrid1D make_uniform_grid(double lower, double upper, int points);

/// Trapezoid quadrature of samples aligned with grid.values.
double integrate(const HypothesisGrid1D& grid, std::span<const double> samples);

}  // namespace metrology

#endif
