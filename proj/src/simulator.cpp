#include "metrology/simulator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "metrology/errors.hpp"

namespace metrology {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

ShotRecord draw_shot(const TruthConfig& truth, double detuning, bool atoms_present,
                     SplitMix64& rng, const OpticalModelConfig& model) {
    const double zeta = lorentzian_zeta({model.gamma_fwhm, detuning});
    const double signal = atoms_present
                              ? truth.phi_true * std::exp(-zeta * truth.theta_true)
                              : truth.phi_true;
    const int raw = rng.poisson(signal + truth.dark_rate);
    return make_shot(detuning, atoms_present, raw, truth.dark_rate);
}

namespace {

// Shared by every fixed-frequency strategy: same draw order as the adaptive
// episode so seeds line up shot for shot.
RunTrace run_fixed_detuning(const Strategy& strategy, double detuning, bool bayesian,
                            const TruthConfig& truth, int k_max, const OpticalModelConfig& model) {
    SplitMix64 rng(truth.seed);
    RunTrace trace;
    trace.strategy = strategy;
    trace.seed = truth.seed;

    const double zeta = lorentzian_zeta({model.gamma_fwhm, detuning});

    JointPosterior post;
    if (bayesian) {
        const auto theta_grid =
            make_uniform_grid(model.theta_min, model.theta_max, model.theta_points);
        const auto phi_grid = make_uniform_grid(model.phi_min, model.phi_max, model.phi_points);
        post = make_joint_mi_prior(model, theta_grid, phi_grid);
    }
    std::vector<ShotRecord> shots_a, shots_b;
    shots_a.reserve(k_max);
    shots_b.reserve(k_max);

    for (int k = 1; k <= k_max; ++k) {
        const ShotRecord shot_a = draw_shot(truth, detuning, true, rng, model);
        const ShotRecord shot_b = draw_shot(truth, detuning, false, rng, model);
        trace.shots.push_back(shot_a);
        trace.shots.push_back(shot_b);
        shots_a.push_back(shot_a);
        shots_b.push_back(shot_b);
        trace.detunings_used.push_back(detuning);

        if (bayesian) {
            try {
                post = joint_update(post, shot_a, model);
                post = joint_update(post, shot_b, model);
            } catch (const ZeroEvidence& e) {
                trace.aborted = true;
                trace.diagnostic = "step " + std::to_string(k) + ": " + e.what();
                trace.detunings_used.pop_back();
                break;
            }
            const AtomEstimate est = atom_estimate(post, model);
            trace.estimates.push_back(est.estimate);
            trace.errors.push_back(est.error);
        } else {
            try {
                const MleEstimate est = mle_estimate(shots_a, shots_b, zeta, model.kappa);
                trace.estimates.push_back(est.estimate);
                trace.errors.push_back(est.error);
            } catch (const NonPositiveMean&) {
                trace.estimates.push_back(kNaN);
                trace.errors.push_back(kNaN);
            }
        }
    }
    return trace;
}

}  // namespace

RunTrace run_strategy(const Strategy& strategy, const TruthConfig& truth, int k_max,
                      const ControllerConfig& cfg, const OpticalModelConfig& model) {
    truth.validate();
    model.validate();
    if (k_max < 1) throw std::invalid_argument("run_strategy: k_max must be >= 1");

    switch (strategy.kind) {
        case StrategyKind::OnResonanceMle:
            return run_fixed_detuning(strategy, 0.0, false, truth, k_max, model);
        case StrategyKind::DetunedMle:
            return run_fixed_detuning(strategy, strategy.detuning, false, truth, k_max, model);
        case StrategyKind::OnResonanceBayes:
            return run_fixed_detuning(strategy, 0.0, true, truth, k_max, model);
        case StrategyKind::AprioriBayes: {
            const auto theta_grid =
                make_uniform_grid(model.theta_min, model.theta_max, model.theta_points);
            const auto phi_grid =
                make_uniform_grid(model.phi_min, model.phi_max, model.phi_points);
            const JointPosterior prior = make_joint_mi_prior(model, theta_grid, phi_grid);
            const GainCurve curve = select_detuning(prior, cfg, model);
            return run_fixed_detuning(strategy, curve.argmax_detuning, true, truth, k_max, model);
        }
        case StrategyKind::AdaptiveBayes:
            return run_adaptive_episode(truth, k_max, truth.seed, cfg, model);
    }
    throw std::logic_error("run_strategy: unhandled strategy kind");
}

}  // namespace metrology
