#include "metrology/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace metrology {

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) {
        throw std::invalid_argument("CubicSpline: need >= 2 knots and matching y");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) {
            throw std::invalid_argument("CubicSpline: knots must be strictly increasing");
        }
    }
    m_.assign(n, 0.0);
    if (n == 2) return;  // natural spline through 2 points is the chord

    // Tridiagonal system for interior second derivatives (natural ends).
    const std::size_t interior = n - 2;
    std::vector<double> diag(interior), rhs(interior), upper(interior);
    for (std::size_t i = 0; i < interior; ++i) {
        const double h0 = x_[i + 1] - x_[i];
        const double h1 = x_[i + 2] - x_[i + 1];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 2] - y_[i + 1]) / h1 - (y_[i + 1] - y_[i]) / h0);
    }
    for (std::size_t i = 1; i < interior; ++i) {
        const double lower = x_[i + 1] - x_[i];  // sub-diagonal equals h_i
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    m_[interior] = rhs[interior - 1] / diag[interior - 1];
    for (std::size_t i = interior - 1; i >= 1; --i) {
        m_[i] = (rhs[i - 1] - upper[i - 1] * m_[i + 1]) / diag[i - 1];
    }
}

double CubicSpline::operator()(double x) const {
    const std::size_t n = x_.size();
    x = std::clamp(x, x_.front(), x_.back());
    std::size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
    i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

CubicSpline::Extremum CubicSpline::maximum() const {
    Extremum best{x_.front(), y_.front()};
    auto consider = [&](double x) {
        const double v = (*this)(x);
        if (v > best.value) best = {x, v};  // strict: ties keep the smaller x
    };
    const std::size_t n = x_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = x_[i + 1] - x_[i];
        // s'(u) = A u^2 + B u + C on u in [0, h]
        const double A = (m_[i + 1] - m_[i]) / (2.0 * h);
        const double B = m_[i];
        const double C = (y_[i + 1] - y_[i]) / h - m_[i] * h / 2.0 - (m_[i + 1] - m_[i]) * h / 6.0;
        if (std::abs(A) > 0.0) {
            const double disc = B * B - 4.0 * A * C;
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                for (double u : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
                    if (u > 0.0 && u < h) consider(x_[i] + u);
                }
            }
        } else if (std::abs(B) > 0.0) {
            const double u = -C / B;
            if (u > 0.0 && u < h) consider(x_[i] + u);
        }
        consider(x_[i + 1]);
    }
    return best;
}

}  // namespace metrology
