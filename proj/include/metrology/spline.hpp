#ifndef METROLOGY_SPLINE_HPP
#define METROLOGY_SPLINE_HPP

#include <span>
#include <vector>

namespace metrology {

/// Natural cubic spline through (x, y) knots with strictly increasing x.
class CubicSpline {
  public:
    CubicSpline(std::span<const double> x, std::span<const double> y);

    /// Interpolant value; x is clamped to the knot range.
    double operator()(double x) const;

    /// Global maximum over the knot range. Candidates are the knots and the
    /// interior critical points of each cubic piece; ties resolve to the
    /// smallest x.
    struct Extremum {
        double x = 0.0;
        double value = 0.0;
    };
    Extremum maximum() const;

  private:
    std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

}  // namespace metrology

#endif
