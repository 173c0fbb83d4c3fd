#include "metrology/symmetry.hpp"

#include <cmath>

namespace metrology {

SymmetrySpec SymmetrySpec::linear() {
    SymmetrySpec spec;
    spec.kind = SymmetryKind::Linear;
    spec.f = [](double x) { return x; };
    spec.f_inverse = [](double y) { return y; };
    spec.f_derivative = [](double) { return 1.0; };
    return spec;
}

SymmetrySpec SymmetrySpec::logarithmic() {
    SymmetrySpec spec;
    spec.kind = SymmetryKind::Logarithmic;
    spec.f = [](double x) { return std::log(x); };
    spec.f_inverse = [](double y) { return std::exp(y); };
    spec.f_derivative = [](double x) { return 1.0 / x; };
    return spec;
}

SymmetrySpec SymmetrySpec::artanh_weight() {
    SymmetrySpec spec;
    spec.kind = SymmetryKind::ArtanhWeight;
    spec.f = [](double z) { return 2.0 * std::atanh(2.0 * z - 1.0); };
    spec.f_inverse = [](double y) { return 0.5 * (std::tanh(0.5 * y) + 1.0); };
    // d/dz 2*artanh(2z-1) = 1/(z(1-z))
    spec.f_derivative = [](double z) { return 1.0 / (z * (1.0 - z)); };
    return spec;
}

SymmetrySpec SymmetrySpec::custom(std::function<double(double)> f,
                                  std::function<double(double)> f_inverse,
                                  std::function<double(double)> f_derivative) {
    SymmetrySpec spec;
    spec.kind = SymmetryKind::Custom;
    spec.f = std::move(f);
    spec.f_inverse = std::move(f_inverse);
    spec.f_derivative = std::move(f_derivative);
    return spec;
}

}  // namespace metrology
