#include "metrology/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "metrology/errors.hpp"
#include "metrology/simulator.hpp"
#include "metrology/spline.hpp"

namespace metrology {

ControllerConfig ControllerConfig::defaults() {
    ControllerConfig cfg;
    cfg.detuning_candidates.resize(13);
    for (int i = 0; i < 13; ++i) cfg.detuning_candidates[i] = 0.5 * i;
    return cfg;
}

void ControllerConfig::validate() const {
    if (detuning_candidates.empty()) {
        throw ConfigError("detuning_candidates", "must be nonempty");
    }
    if (!std::is_sorted(detuning_candidates.begin(), detuning_candidates.end())) {
        throw ConfigError("detuning_candidates", "must be ascending");
    }
    if (!(outcome_mass_threshold > 0.0 && outcome_mass_threshold < 1.0)) {
        throw ConfigError("outcome_mass_threshold", "must be in (0, 1)");
    }
    if (!(density_truncation > 0.0 && density_truncation < 1.0)) {
        throw ConfigError("density_truncation", "must be in (0, 1)");
    }
    if (max_outcome < 1) throw ConfigError("max_outcome", "must be >= 1");
}

SupportWindow truncate_support(const JointPosterior& post, const ControllerConfig& cfg) {
    const int ntheta = static_cast<int>(post.theta_grid.values.size());
    const int nphi = static_cast<int>(post.phi_grid.values.size());

    std::vector<double> theta_max(ntheta, 0.0), phi_max(nphi, 0.0);
    double peak = 0.0;
    for (int p = 0; p < nphi; ++p) {
        const double* cell = post.density.data() + static_cast<std::size_t>(p) * ntheta;
        for (int t = 0; t < ntheta; ++t) {
            const double d = cell[t];
            if (d > theta_max[t]) theta_max[t] = d;
            if (d > phi_max[p]) phi_max[p] = d;
            if (d > peak) peak = d;
        }
    }
    const double threshold = cfg.density_truncation * peak;
    auto window_of = [threshold](const std::vector<double>& axis_max) {
        IndexWindow w{0, static_cast<int>(axis_max.size()) - 1};
        while (w.lo < w.hi && axis_max[w.lo] < threshold) ++w.lo;
        while (w.hi > w.lo && axis_max[w.hi] < threshold) --w.hi;
        return w;
    };
    return SupportWindow{window_of(theta_max), window_of(phi_max)};
}

double gain_at_detuning(const JointPosterior& post, double detuning, const ControllerConfig& cfg,
                        const OpticalModelConfig& model) {
    const SupportWindow window = truncate_support(post, cfg);
    const int ntheta = static_cast<int>(post.theta_grid.values.size());
    const int wt = window.theta.extent();
    const int wp = window.phi.extent();
    const std::size_t cells = static_cast<std::size_t>(wt) * wp;

    const double zeta = lorentzian_zeta({model.gamma_fwhm, detuning});
    std::vector<double> transmittance(wt);
    for (int t = 0; t < wt; ++t) {
        transmittance[t] = std::exp(-zeta * post.theta_grid.values[window.theta.lo + t]);
    }

    // Flattened per-cell state over the window: prior mass, prior mass times
    // theta, expected raw count, running Poisson pmf.
    std::vector<double> mass(cells), mass_theta(cells), mean(cells), pmf(cells);
    double window_mass = 0.0;
    std::size_t c = 0;
    for (int p = 0; p < wp; ++p) {
        const int ip = window.phi.lo + p;
        const double phi = post.phi_grid.values[ip];
        const double wphi = post.phi_grid.weights[ip];
        const double* row = post.density.data() + static_cast<std::size_t>(ip) * ntheta;
        for (int t = 0; t < wt; ++t, ++c) {
            const int it = window.theta.lo + t;
            const double m = wphi * post.theta_grid.weights[it] * row[it];
            mass[c] = m;
            mass_theta[c] = m * post.theta_grid.values[it];
            mean[c] = phi * transmittance[t] + model.dark_rate;
            pmf[c] = std::exp(-mean[c]);
            window_mass += m;
        }
    }
    if (!(window_mass > 0.0)) {
        throw ZeroEvidence("gain_at_detuning: support window carries no mass");
    }
    const double inv_mass = 1.0 / window_mass;
    for (std::size_t i = 0; i < cells; ++i) {
        mass[i] *= inv_mass;
        mass_theta[i] *= inv_mass;
    }

    // Worst case for outcome coverage is the largest windowed mean: the
    // Poisson CDF at fixed n decreases in the mean.
    const double worst_mean = post.phi_grid.values[window.phi.hi] *
                                  std::exp(-zeta * post.theta_grid.values[window.theta.lo]) +
                              model.dark_rate;
    double worst_pmf = std::exp(-worst_mean);
    double worst_coverage = 0.0;

    double gain = 0.0;
    for (int n = 0;; ++n) {
        double evidence = 0.0;
        double theta_numer = 0.0;
        for (std::size_t i = 0; i < cells; ++i) {
            evidence += mass[i] * pmf[i];
            theta_numer += mass_theta[i] * pmf[i];
        }
        if (evidence > 0.0) gain += theta_numer * theta_numer / evidence;

        worst_coverage += worst_pmf;
        if (worst_coverage >= cfg.outcome_mass_threshold) break;
        if (n == cfg.max_outcome) {
            throw TruncationFailure("gain_at_detuning: coverage not reached by outcome " +
                                    std::to_string(cfg.max_outcome));
        }
        const double step = 1.0 / (n + 1.0);
        for (std::size_t i = 0; i < cells; ++i) pmf[i] *= mean[i] * step;
        worst_pmf *= worst_mean * step;
    }
    return gain;
}

GainCurve select_detuning(const JointPosterior& post, const ControllerConfig& cfg,
                          const OpticalModelConfig& model) {
    cfg.validate();
    GainCurve curve;
    curve.detunings = cfg.detuning_candidates;
    curve.gains.reserve(curve.detunings.size());
    for (double detuning : curve.detunings) {
        curve.gains.push_back(gain_at_detuning(post, detuning, cfg, model));
    }
    if (curve.detunings.size() >= 4) {
        curve.interpolation = GainInterpolation::CubicSpline;
        const CubicSpline spline(curve.detunings, curve.gains);
        const auto peak = spline.maximum();
        curve.argmax_detuning =
            std::clamp(peak.x, curve.detunings.front(), curve.detunings.back());
        curve.argmax_gain = peak.value;
    } else {
        curve.interpolation = GainInterpolation::None;
        std::size_t best = 0;
        for (std::size_t i = 1; i < curve.gains.size(); ++i) {
            if (curve.gains[i] > curve.gains[best]) best = i;
        }
        curve.argmax_detuning = curve.detunings[best];
        curve.argmax_gain = curve.gains[best];
    }
    return curve;
}

RunTrace run_adaptive_episode(const TruthConfig& truth, int k_max, std::uint64_t seed,
                              const ControllerConfig& cfg, const OpticalModelConfig& model) {
    truth.validate();
    model.validate();
    cfg.validate();
    if (k_max < 1) throw std::invalid_argument("run_adaptive_episode: k_max must be >= 1");

    const auto theta_grid = make_uniform_grid(model.theta_min, model.theta_max, model.theta_points);
    const auto phi_grid = make_uniform_grid(model.phi_min, model.phi_max, model.phi_points);
    JointPosterior post = make_joint_mi_prior(model, theta_grid, phi_grid);

    SplitMix64 rng(seed);
    RunTrace trace;
    trace.strategy = Strategy{StrategyKind::AdaptiveBayes};
    trace.seed = seed;
    for (int k = 1; k <= k_max; ++k) {
        const GainCurve curve = select_detuning(post, cfg, model);
        const double detuning = curve.argmax_detuning;
        const ShotRecord shot_a = draw_shot(truth, detuning, true, rng, model);
        const ShotRecord shot_b = draw_shot(truth, detuning, false, rng, model);
        trace.shots.push_back(shot_a);
        trace.shots.push_back(shot_b);
        try {
            post = joint_update(post, shot_a, model);
            post = joint_update(post, shot_b, model);
        } catch (const ZeroEvidence& e) {
            trace.aborted = true;
            trace.diagnostic = "step " + std::to_string(k) + ": " + e.what();
            break;
        }
        const AtomEstimate est = atom_estimate(post, model);
        trace.estimates.push_back(est.estimate);
        trace.errors.push_back(est.error);
        trace.detunings_used.push_back(detuning);
    }
    return trace;
}

}  // namespace metrology
