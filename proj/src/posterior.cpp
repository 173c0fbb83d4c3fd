#include "metrology/posterior.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "metrology/errors.hpp"

namespace metrology {

namespace {
constexpr double kUnderflowGuard = 1e-300;
}

Posterior1D normalize(const HypothesisGrid1D& grid, std::vector<double> density) {
    if (density.size() != grid.values.size()) {
        throw std::invalid_argument("normalize: density length does not match grid");
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) {
        if (!(density[i] >= 0.0)) {
            throw std::invalid_argument("normalize: negative or NaN density sample");
        }
        mass += grid.weights[i] * density[i];
    }
    if (!(mass > kUnderflowGuard)) {
        throw ZeroEvidence("normalize: density integrates to nothing");
    }
    const double inv = 1.0 / mass;
    for (double& d : density) d *= inv;
    return Posterior1D{grid, std::move(density)};
}

Posterior1D make_mi_prior(const SymmetrySpec& spec, const HypothesisGrid1D& grid) {
    std::vector<double> density(grid.values.size());
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        const double d = spec.f_derivative(grid.values[i]);
        if (!std::isfinite(d) || d == 0.0) {
            throw NonFiniteDerivative("make_mi_prior: f' non-finite or zero at " +
                                      std::to_string(grid.values[i]) + "; shrink the range");
        }
        density[i] = std::abs(d);
    }
    return normalize(grid, std::move(density));
}

Posterior1D bayes_update(const Posterior1D& prior, std::span<const double> likelihood_values) {
    if (likelihood_values.size() != prior.density.size()) {
        throw std::invalid_argument("bayes_update: likelihood length does not match grid");
    }
    std::vector<double> density(prior.density.size());
    for (std::size_t i = 0; i < density.size(); ++i) {
        const double like = likelihood_values[i];
        if (!(like >= 0.0)) {
            throw std::invalid_argument("bayes_update: negative or NaN likelihood value");
        }
        density[i] = prior.density[i] * like;
    }
    try {
        return normalize(prior.grid, std::move(density));
    } catch (const ZeroEvidence&) {
        throw ZeroEvidence("bayes_update: likelihood is zero on the whole prior support");
    }
}

double posterior_mean(const Posterior1D& post) {
    double acc = 0.0;
    for (std::size_t i = 0; i < post.density.size(); ++i) {
        acc += post.grid.weights[i] * post.density[i] * post.grid.values[i];
    }
    return acc;
}

double posterior_variance(const Posterior1D& post) {
    const double mu = posterior_mean(post);
    double acc = 0.0;
    for (std::size_t i = 0; i < post.density.size(); ++i) {
        const double d = post.grid.values[i] - mu;
        acc += post.grid.weights[i] * post.density[i] * d * d;
    }
    return acc;
}

namespace {

// First and second quadrature moments of f under the posterior.
void f_moments(const Posterior1D& post, const SymmetrySpec& spec, double& m1, double& m2) {
    m1 = 0.0;
    m2 = 0.0;
    for (std::size_t i = 0; i < post.density.size(); ++i) {
        const double fv = spec.f(post.grid.values[i]);
        const double w = post.grid.weights[i] * post.density[i];
        m1 += w * fv;
        m2 += w * fv * fv;
    }
}

}  // namespace

double optimal_estimate(const Posterior1D& post, const SymmetrySpec& spec) {
    double m1 = 0.0, m2 = 0.0;
    f_moments(post, spec, m1, m2);
    return spec.f_inverse(m1);
}

double optimal_uncertainty(const Posterior1D& post, const SymmetrySpec& spec) {
    double m1 = 0.0, m2 = 0.0;
    f_moments(post, spec, m1, m2);
    const double estimate = spec.f_inverse(m1);
    const double slope = spec.f_derivative(estimate);
    if (std::abs(slope) < kUnderflowGuard) {
        throw DegenerateDerivative("optimal_uncertainty: |f'| underflows at the estimate");
    }
    // Quadrature noise can push m2 - m1^2 a hair below zero for point masses.
    const double loss = std::max(0.0, m2 - m1 * m1);
    return std::sqrt(loss) / std::abs(slope);
}

double grid_mle(std::span<const double> likelihood_values, const HypothesisGrid1D& grid) {
    if (likelihood_values.size() != grid.values.size()) {
        throw std::invalid_argument("grid_mle: likelihood length does not match grid");
    }
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    bool any_positive = false;
    for (std::size_t i = 0; i < likelihood_values.size(); ++i) {
        const double like = likelihood_values[i];
        if (!std::isfinite(like)) {
            throw std::invalid_argument("grid_mle: non-finite likelihood value");
        }
        if (like > 0.0) any_positive = true;
        if (like > best) {  // strict: ties keep the smallest hypothesis
            best = like;
            best_index = i;
        }
    }
    if (!any_positive) {
        throw AllZeroLikelihood("grid_mle: likelihood is identically zero");
    }
    return grid.values[best_index];
}

}  // namespace metrology
