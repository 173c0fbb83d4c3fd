#ifndef METROLOGY_CONTROLLER_HPP
#define METROLOGY_CONTROLLER_HPP

#include <cstdint>
#include <vector>

#include "metrology/absorption.hpp"
#include "metrology/trace.hpp"

namespace metrology {

/// Settings for the per-shot detuning search.
struct ControllerConfig {
    /// Candidate detunings, MHz, ascending. Defaults to 13 points on [0, 6].
    std::vector<double> detuning_candidates;
    /// Outcome sum runs until this coverage holds for the worst-case
    /// hypothesis still inside the support window.
    double outcome_mass_threshold = 0.99;
    /// Cells below this fraction of the peak density fall outside the
    /// integration windows.
    double density_truncation = 0.01;
    /// Hard cap on the outcome sum.
    int max_outcome = 400;

    static ControllerConfig defaults();
    void validate() const;  // throws ConfigError
};

enum class GainInterpolation { CubicSpline, None };

/// Sampled precision gain versus candidate detuning with the interpolated
/// maximizer.
struct GainCurve {
    std::vector<double> detunings;
    std::vector<double> gains;
    double argmax_detuning = 0.0;
    double argmax_gain = 0.0;
    GainInterpolation interpolation = GainInterpolation::CubicSpline;
};

/// Inclusive index range.
struct IndexWindow {
    int lo = 0;
    int hi = 0;
    int extent() const { return hi - lo + 1; }
};

struct SupportWindow {
    IndexWindow theta;
    IndexWindow phi;
};

/// Smallest contiguous theta and phi index windows outside which every cell
/// sits below density_truncation times the peak density.
SupportWindow truncate_support(const JointPosterior& post, const ControllerConfig& cfg);

/// Precision gain of one atom shot at the given detuning, with f(theta) =
/// theta. Integrals run over the truncated support (renormalized); the
/// outcome sum follows the worst-case coverage rule. Throws
/// TruncationFailure when max_outcome is hit first.
double gain_at_detuning(const JointPosterior& post, double detuning, const ControllerConfig& cfg,
                        const OpticalModelConfig& model);

/// Evaluates the gain on every candidate, interpolates with a natural cubic
/// spline (>= 4 candidates) and returns the maximizer, ties toward the
/// smaller detuning.
GainCurve select_detuning(const JointPosterior& post, const ControllerConfig& cfg,
                          const OpticalModelConfig& model);

/// Full adaptive run: each step selects the detuning from the current belief,
/// draws one atom and one no-atom shot at it, updates, and records the
/// estimate. Deterministic given the seed. A ZeroEvidence update aborts the
/// episode and leaves a diagnostic on the trace.
RunTrace run_adaptive_episode(const TruthConfig& truth, int k_max, std::uint64_t seed,
                              const ControllerConfig& cfg, const OpticalModelConfig& model);

}  // namespace metrology

#endif
