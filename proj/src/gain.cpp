#include "metrology/gain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "metrology/errors.hpp"

namespace metrology {

PrecisionGainResult precision_gain(const Posterior1D& prior, const SymmetrySpec& spec,
                                   const OutcomeLikelihood& outcome_likelihood,
                                   const TruncationPolicy& truncation) {
    if (!(truncation.outcome_mass_threshold > 0.0 && truncation.outcome_mass_threshold <= 1.0)) {
        throw std::invalid_argument("precision_gain: outcome_mass_threshold must be in (0, 1]");
    }
    const std::size_t size = prior.density.size();

    // Only hypotheses with prior mass constrain coverage.
    std::vector<std::size_t> support;
    support.reserve(size);
    std::vector<double> mass(size), f_values(size);
    for (std::size_t i = 0; i < size; ++i) {
        mass[i] = prior.grid.weights[i] * prior.density[i];
        f_values[i] = spec.f(prior.grid.values[i]);
        if (prior.density[i] > 0.0) support.push_back(i);
    }

    std::vector<double> cumulative(size, 0.0);
    PrecisionGainResult result;
    for (int n = 0;; ++n) {
        if (n > truncation.max_outcome) {
            throw TruncationFailure("precision_gain: coverage " +
                                    std::to_string(truncation.outcome_mass_threshold) +
                                    " not reached by outcome " + std::to_string(truncation.max_outcome));
        }
        double evidence = 0.0;
        double f_numer = 0.0;
        for (std::size_t i : support) {
            const double like = outcome_likelihood(n, prior.grid.values[i]);
            if (!(like >= 0.0)) {
                throw std::invalid_argument("precision_gain: negative or NaN likelihood");
            }
            cumulative[i] += like;
            const double joint = mass[i] * like;
            evidence += joint;
            f_numer += joint * f_values[i];
        }
        if (evidence > 0.0) {
            const double estimate_f = f_numer / evidence;
            result.gain += evidence * estimate_f * estimate_f;
            result.per_outcome_terms.push_back({n, evidence, estimate_f});
        }
        result.truncation_bound = n;

        double worst = 1.0;
        for (std::size_t i : support) worst = std::min(worst, cumulative[i]);
        if (worst >= truncation.outcome_mass_threshold) break;
    }
    return result;
}

}  // namespace metrology
