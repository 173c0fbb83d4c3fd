#include "metrology/grid.hpp"

#include <stdexcept>
#include <string>

namespace metrology {

HypothesisGrid1D make_uniform_grid(double lower, double upper, int points) {
    if (!(lower < upper)) {
        throw std::invalid_argument("grid: lower must be < upper");
    }
    if (points < 2) {
        throw std::invalid_argument("grid: need at least 2 points, got " + std::to_string(points));
    }
    HypothesisGrid1D grid;
    grid.lower = lower;
    grid.upper = upper;
    grid.points = points;
    grid.values.resize(points);
    grid.weights.resize(points);
    const double h = (upper - lower) / static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) {
        grid.values[i] = lower + h * static_cast<double>(i);
    }
    grid.values.front() = lower;
    grid.values.back() = upper;  // endpoints exact, no accumulated rounding
    for (int i = 0; i < points; ++i) {
        grid.weights[i] = (i == 0 || i == points - 1) ? 0.5 * h : h;
    }
    return grid;
}

double integrate(const HypothesisGrid1D& grid, std::span<const double> samples) {
    if (samples.size() != grid.values.size()) {
        throw std::invalid_argument("integrate: sample length does not match grid");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        acc += grid.weights[i] * samples[i];
    }
    return acc;
}

}  // namespace metrology
