#ifndef METROLOGY_GAIN_HPP
#define METROLOGY_GAIN_HPP

#include <functional>
#include <vector>

#include "metrology/posterior.hpp"
#include "metrology/symmetry.hpp"

namespace metrology {

/// Rule for cutting off the outcome sum: outcomes are included from 0 upward
/// until the cumulative outcome probability reaches the threshold under every
/// hypothesis carrying prior mass, never past max_outcome.
struct TruncationPolicy {
    double outcome_mass_threshold = 0.99;
    int max_outcome = 10000;
};

struct OutcomeTerm {
    int outcome = 0;
    double evidence = 0.0;    // predicted probability of this outcome
    double estimate_f = 0.0;  // f-value of the post-outcome estimate
};

struct PrecisionGainResult {
    double gain = 0.0;
    std::vector<OutcomeTerm> per_outcome_terms;
    int truncation_bound = 0;  // largest outcome included
};

/// Probability of integer outcome n given hypothesis theta.
using OutcomeLikelihood = std::function<double(int n, double theta)>;

/// Expected squared f-value of the post-measurement estimate, summed over
/// predicted outcomes:
///   gain = sum_n p(n) * f(estimate | n)^2,  p(n) = integral of prior * likelihood.
/// Maximizing this over a control parameter minimizes the expected loss left
/// after the measurement. Throws TruncationFailure when coverage cannot be
/// reached within the policy's cap.
PrecisionGainResult precision_gain(const Posterior1D& prior, const SymmetrySpec& spec,
                                   const OutcomeLikelihood& outcome_likelihood,
                                   const TruncationPolicy& truncation);

}  // namespace metrology

#endif
