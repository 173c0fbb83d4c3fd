#include "metrology/absorption.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "metrology/errors.hpp"

namespace metrology {

double lorentzian_zeta(const LineshapeParams& params) {
    if (!(params.gamma_fwhm > 0.0)) {
        throw std::invalid_argument("lorentzian_zeta: gamma_fwhm must be positive");
    }
    const double g2 = params.gamma_fwhm * params.gamma_fwhm;
    return g2 / (g2 + 4.0 * params.detuning * params.detuning);
}

double expected_count(double phi, double theta, double zeta, double dark_rate) {
    return phi * std::exp(-zeta * theta) + dark_rate;
}

double poisson_log_pmf(int n, double mean) {
    if (n < 0) throw std::invalid_argument("poisson_log_pmf: n must be >= 0");
    if (!(mean > 0.0)) throw std::invalid_argument("poisson_log_pmf: mean must be positive");
    return static_cast<double>(n) * std::log(mean) - mean - std::lgamma(static_cast<double>(n) + 1.0);
}

double poisson_pmf(int n, double mean) { return std::exp(poisson_log_pmf(n, mean)); }

void OpticalModelConfig::validate() const {
    if (!(kappa > 0.0)) throw ConfigError("kappa", "must be > 0");
    if (!(gamma_fwhm > 0.0)) throw ConfigError("gamma_fwhm_mhz", "must be > 0");
    if (!(dark_rate >= 0.0)) throw ConfigError("dark_rate", "must be >= 0");
    if (!(phi_min > 0.0)) throw ConfigError("phi_min", "must be > 0");
    if (!(phi_min < phi_max)) throw ConfigError("phi_max", "must exceed phi_min");
    if (!(theta_min >= 0.0)) throw ConfigError("theta_min", "must be >= 0");
    if (!(theta_min < theta_max)) throw ConfigError("theta_max", "must exceed theta_min");
    if (theta_points < 2) throw ConfigError("theta_points", "must be >= 2");
    if (phi_points < 2) throw ConfigError("phi_points", "must be >= 2");
}

ShotRecord make_shot(double detuning, bool atoms_present, int raw_count, double dark_rate) {
    if (raw_count < 0) throw std::invalid_argument("make_shot: raw_count must be >= 0");
    return ShotRecord{detuning, atoms_present, raw_count,
                      static_cast<double>(raw_count) - dark_rate};
}

double JointPosterior::mass() const {
    const std::size_t ntheta = theta_grid.values.size();
    const std::size_t nphi = phi_grid.values.size();
    double acc = 0.0;
    for (std::size_t p = 0; p < nphi; ++p) {
        double row = 0.0;
        const double* cell = density.data() + p * ntheta;
        for (std::size_t t = 0; t < ntheta; ++t) {
            row += theta_grid.weights[t] * cell[t];
        }
        acc += phi_grid.weights[p] * row;
    }
    return acc;
}

namespace {

void renormalize(JointPosterior& post) {
    const double mass = post.mass();
    if (!(mass > 1e-300)) {
        throw ZeroEvidence("joint posterior: density integrates to nothing");
    }
    const double inv = 1.0 / mass;
    for (double& d : post.density) d *= inv;
}

}  // namespace

JointPosterior make_joint_mi_prior(const OpticalModelConfig& cfg,
                                   const HypothesisGrid1D& theta_grid,
                                   const HypothesisGrid1D& phi_grid) {
    cfg.validate();
    if (theta_grid.lower != cfg.theta_min || theta_grid.upper != cfg.theta_max ||
        phi_grid.lower != cfg.phi_min || phi_grid.upper != cfg.phi_max) {
        throw std::invalid_argument("make_joint_mi_prior: grids must span the config ranges");
    }
    JointPosterior post;
    post.theta_grid = theta_grid;
    post.phi_grid = phi_grid;
    post.density.resize(theta_grid.values.size() * phi_grid.values.size());
    const double norm = 1.0 / ((cfg.theta_max - cfg.theta_min) * std::log(cfg.phi_max / cfg.phi_min));
    for (std::size_t p = 0; p < phi_grid.values.size(); ++p) {
        const double row = norm / phi_grid.values[p];
        double* cell = post.density.data() + p * theta_grid.values.size();
        for (std::size_t t = 0; t < theta_grid.values.size(); ++t) cell[t] = row;
    }
    // Analytic normalization differs from the grid quadrature by O(h^2);
    // rescale so the represented density integrates to one exactly.
    renormalize(post);
    return post;
}

JointPosterior joint_update(const JointPosterior& post, const ShotRecord& shot,
                            const OpticalModelConfig& cfg) {
    if (shot.raw_count < 0) {
        throw std::invalid_argument("joint_update: raw_count must be >= 0");
    }
    const double sanity = 10.0 * cfg.phi_max + cfg.dark_rate;
    if (static_cast<double>(shot.raw_count) > sanity) {
        throw std::invalid_argument("joint_update: raw_count " + std::to_string(shot.raw_count) +
                                    " exceeds sanity bound " + std::to_string(sanity));
    }
    const std::size_t ntheta = post.theta_grid.values.size();
    const std::size_t nphi = post.phi_grid.values.size();
    const double n = static_cast<double>(shot.raw_count);
    const double lgam = std::lgamma(n + 1.0);

    JointPosterior next = post;
    if (shot.atoms_present) {
        const double zeta = lorentzian_zeta({cfg.gamma_fwhm, shot.detuning});
        std::vector<double> transmittance(ntheta);
        for (std::size_t t = 0; t < ntheta; ++t) {
            transmittance[t] = std::exp(-zeta * post.theta_grid.values[t]);
        }
        for (std::size_t p = 0; p < nphi; ++p) {
            const double phi = post.phi_grid.values[p];
            double* cell = next.density.data() + p * ntheta;
            for (std::size_t t = 0; t < ntheta; ++t) {
                const double mean = phi * transmittance[t] + cfg.dark_rate;
                cell[t] *= std::exp(n * std::log(mean) - mean - lgam);
            }
        }
    } else {
        // No atoms: the likelihood depends on phi only.
        for (std::size_t p = 0; p < nphi; ++p) {
            const double mean = post.phi_grid.values[p] + cfg.dark_rate;
            const double like = std::exp(n * std::log(mean) - mean - lgam);
            double* cell = next.density.data() + p * ntheta;
            for (std::size_t t = 0; t < ntheta; ++t) cell[t] *= like;
        }
    }
    renormalize(next);
    return next;
}

Posterior1D marginal_theta(const JointPosterior& post) {
    const std::size_t ntheta = post.theta_grid.values.size();
    const std::size_t nphi = post.phi_grid.values.size();
    std::vector<double> marginal(ntheta, 0.0);
    for (std::size_t p = 0; p < nphi; ++p) {
        const double wp = post.phi_grid.weights[p];
        const double* cell = post.density.data() + p * ntheta;
        for (std::size_t t = 0; t < ntheta; ++t) {
            marginal[t] += wp * cell[t];
        }
    }
    return normalize(post.theta_grid, std::move(marginal));
}

AtomEstimate atom_estimate(const JointPosterior& post, const OpticalModelConfig& cfg) {
    const Posterior1D marginal = marginal_theta(post);
    const double mean = posterior_mean(marginal);
    const double var = posterior_variance(marginal);

    AtomEstimate out;
    out.estimate = cfg.kappa * mean;
    out.error = cfg.kappa * std::sqrt(std::max(0.0, var));

    const std::size_t n = marginal.density.size();
    double edge_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i < 2 || i + 2 >= n) {
            edge_mass += marginal.grid.weights[i] * marginal.density[i];
        }
    }
    out.edge_concentration = edge_mass > 0.05;
    return out;
}

namespace {

struct MeanStats {
    double mean = 0.0;
    double standard_error = 0.0;  // NaN for a single shot
    std::size_t count = 0;
};

MeanStats corrected_mean(std::span<const ShotRecord> shots) {
    MeanStats stats;
    stats.count = shots.size();
    if (shots.empty()) return stats;
    double acc = 0.0;
    for (const ShotRecord& s : shots) acc += s.corrected_count;
    stats.mean = acc / static_cast<double>(shots.size());
    if (shots.size() >= 2) {
        double ss = 0.0;
        for (const ShotRecord& s : shots) {
            const double d = s.corrected_count - stats.mean;
            ss += d * d;
        }
        const double sample_var = ss / static_cast<double>(shots.size() - 1);
        stats.standard_error = std::sqrt(sample_var / static_cast<double>(shots.size()));
    } else {
        stats.standard_error = std::numeric_limits<double>::quiet_NaN();
    }
    return stats;
}

}  // namespace

MleEstimate mle_estimate(std::span<const ShotRecord> shots_a, std::span<const ShotRecord> shots_b,
                         double zeta, double kappa) {
    if (shots_a.empty() || shots_b.empty()) {
        throw std::invalid_argument("mle_estimate: both shot sequences must be nonempty");
    }
    if (!(zeta > 0.0 && zeta <= 1.0)) {
        throw std::invalid_argument("mle_estimate: zeta must be in (0, 1]");
    }
    const MeanStats a = corrected_mean(shots_a);
    const MeanStats b = corrected_mean(shots_b);
    if (!(a.mean > 0.0)) {
        throw NonPositiveMean("mle_estimate: corrected atom-shot mean <= 0 (dark overcorrection)");
    }
    if (!(b.mean > 0.0)) {
        throw NonPositiveMean("mle_estimate: corrected no-atom mean <= 0 (dark overcorrection)");
    }
    MleEstimate out;
    const double scale = kappa / zeta;
    out.estimate = scale * std::log(b.mean / a.mean);
    const double ra = a.standard_error / a.mean;
    const double rb = b.standard_error / b.mean;
    out.error = scale * std::sqrt(ra * ra + rb * rb);
    return out;
}

}  // namespace metrology
