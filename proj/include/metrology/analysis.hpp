#ifndef METROLOGY_ANALYSIS_HPP
#define METROLOGY_ANALYSIS_HPP

#include <span>
#include <vector>

#include "metrology/trace.hpp"

namespace metrology {

/// Empirical noise-to-signal ratio Var(x)/mean(x)^2 with the population
/// variance. Requires >= 2 finite values; throws ZeroMean on a zero mean.
double nsr(std::span<const double> estimates);

/// Smallest 1-based step k such that every estimate from k onward stays
/// within fraction * |final| of the final estimate. NaN estimates never
/// qualify as inside the band.
int k_min(std::span<const double> trace_estimates, double fraction = 0.1);

struct StrategySummary {
    Strategy strategy;
    int m = 0;                    // traces contributing at at_k
    double mean_estimate = 0.0;
    double std_estimate = 0.0;    // population
    double nsr_percent = 0.0;
    double mean_error_bar = 0.0;
    double k_min_mean = 0.0;
    int excluded = 0;             // traces dropped for an invalid estimate at at_k
};

/// Per-strategy summary at shot index at_k (1-based). Traces with an invalid
/// (NaN) estimate at at_k are excluded and counted. Output rows follow the
/// canonical strategy order. Throws InsufficientRepeats when a strategy has
/// fewer than 2 usable traces.
std::vector<StrategySummary> summarize(std::span<const RunTrace> traces, int at_k);

struct NsrPoint {
    Strategy strategy;
    int k = 0;
    double nsr = 0.0;  // NaN when fewer than 2 valid estimates exist at k
};

/// NSR as a function of k for each strategy present in the traces.
std::vector<NsrPoint> nsr_series(std::span<const RunTrace> traces);

}  // namespace metrology

#endif
