#ifndef METROLOGY_POSTERIOR_HPP
#define METROLOGY_POSTERIOR_HPP

#include <span>
#include <vector>

#include "metrology/grid.hpp"
#include "metrology/symmetry.hpp"

namespace metrology {

/// Probability density sampled on a grid. Normalized so that the trapezoid
/// integral over the grid equals one.
struct Posterior1D {
    HypothesisGrid1D grid;
    std::vector<double> density;
};

/// Normalizes nonnegative samples into a Posterior1D. Throws ZeroEvidence if
/// the integral underflows.
Posterior1D normalize(const HypothesisGrid1D& grid, std::vector<double> density);

/// Maximum-ignorance prior with density proportional to |f'| over the grid.
/// Throws NonFiniteDerivative if f' is non-finite or zero anywhere on it.
Posterior1D make_mi_prior(const SymmetrySpec& spec, const HypothesisGrid1D& grid);

/// Pointwise product with the likelihood followed by renormalization.
/// Throws ZeroEvidence when the product integrates to (numerically) nothing.
Posterior1D bayes_update(const Posterior1D& prior, std::span<const double> likelihood_values);

/// Quadrature mean and variance of the density.
double posterior_mean(const Posterior1D& post);
double posterior_variance(const Posterior1D& post);

/// Estimate minimizing expected quadratic loss in f-space:
/// f_inverse of the posterior mean of f.
double optimal_estimate(const Posterior1D& post, const SymmetrySpec& spec);

/// Error bar attached to optimal_estimate: sqrt of the posterior f-variance
/// divided by |f'| at the estimate. Throws DegenerateDerivative if |f'|
/// underflows there.
double optimal_uncertainty(const Posterior1D& post, const SymmetrySpec& spec);

/// Grid value maximizing the likelihood. Ties break toward the smallest
/// hypothesis. Throws AllZeroLikelihood when every value is zero.
double grid_mle(std::span<const double> likelihood_values, const HypothesisGrid1D& grid);

}  // namespace metrology

#endif
