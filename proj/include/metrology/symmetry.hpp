#ifndef METROLOGY_SYMMETRY_HPP
#define METROLOGY_SYMMETRY_HPP

#include <functional>

namespace metrology {

enum class SymmetryKind { Linear, Logarithmic, ArtanhWeight, Custom };

/// A strictly monotone map f from hypothesis space to location space, with its
/// inverse and derivative. Quadratic loss in f-space then respects the
/// parameter's natural invariance: translation for locations, rescaling for
/// scales, reweighting for probabilities.
struct SymmetrySpec {
    SymmetryKind kind = SymmetryKind::Custom;
    std::function<double(double)> f;
    std::function<double(double)> f_inverse;
    std::function<double(double)> f_derivative;

    /// f(x) = x. Location parameters.
    static SymmetrySpec linear();

    /// f(x) = log(x) on (0, inf). Scale parameters.
    static SymmetrySpec logarithmic();

    /// f(z) = 2*artanh(2z - 1) on (0, 1). Weight (probability) parameters.
    static SymmetrySpec artanh_weight();

    static SymmetrySpec custom(std::function<double(double)> f,
                               std::function<double(double)> f_inverse,
                               std::function<double(double)> f_derivative);
};

}  // namespace metrology

#endif
