#ifndef METROLOGY_SIMULATOR_HPP
#define METROLOGY_SIMULATOR_HPP

#include "metrology/absorption.hpp"
#include "metrology/controller.hpp"
#include "metrology/rng.hpp"
#include "metrology/trace.hpp"

namespace metrology {

/// One synthetic shot: Poisson raw count around the model mean at the truth
/// parameters, dark-corrected with the same dark rate.
ShotRecord draw_shot(const TruthConfig& truth, double detuning, bool atoms_present,
                     SplitMix64& rng, const OpticalModelConfig& model);

/// Executes one strategy for k_max shot pairs and returns its trace. The MLE
/// strategies estimate from cumulative corrected means at every step; steps
/// where a corrected mean is <= 0 carry NaN estimates. All strategies consume
/// exactly 2*k_max Poisson draws.
RunTrace run_strategy(const Strategy& strategy, const TruthConfig& truth, int k_max,
                      const ControllerConfig& cfg, const OpticalModelConfig& model);

}  // namespace metrology

#endif
