#ifndef METROLOGY_ABSORPTION_HPP
#define METROLOGY_ABSORPTION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "metrology/grid.hpp"
#include "metrology/posterior.hpp"

namespace metrology {

/// Cs D2 F=4 -> F'=5 resonance, THz. Informational only; all frequencies in
/// this library are detunings from resonance, in MHz.
inline constexpr double kResonanceFrequencyTHz = 351.721961;

struct LineshapeParams {
    double gamma_fwhm = 5.234;  // natural linewidth (FWHM), MHz
    double detuning = 0.0;      // probe offset from resonance, MHz
};

/// Lorentzian absorption factor in (0, 1]: 1 on resonance, 1/2 at half-width.
double lorentzian_zeta(const LineshapeParams& params);

/// Mean raw photon count for one shot: phi * exp(-zeta * theta) + dark_rate.
double expected_count(double phi, double theta, double zeta, double dark_rate);

/// Poisson pmf evaluated in log space; stable for n up to ~1e4. mean > 0.
double poisson_log_pmf(int n, double mean);
double poisson_pmf(int n, double mean);

/// Physical configuration of the absorption measurement and the hypothesis
/// ranges / grid resolutions used for inference.
struct OpticalModelConfig {
    double kappa = 84.9;       // atoms per unit optical depth
    double gamma_fwhm = 5.234; // MHz
    double dark_rate = 1.0;    // expected dark counts per shot
    double phi_min = 5.0;
    double phi_max = 20.0;
    double theta_min = 0.0;
    double theta_max = 8.0;
    int theta_points = 401;
    int phi_points = 201;

    void validate() const;  // throws ConfigError naming the offending field
};

/// One measurement shot. corrected_count = raw_count - dark_rate and may be
/// negative.
struct ShotRecord {
    double detuning = 0.0;  // MHz
    bool atoms_present = true;
    int raw_count = 0;
    double corrected_count = 0.0;
};

ShotRecord make_shot(double detuning, bool atoms_present, int raw_count, double dark_rate);

/// Discretized joint belief over (phi, theta), stored row-major with phi as
/// the slow index. Normalized under the double trapezoid rule.
struct JointPosterior {
    HypothesisGrid1D theta_grid;
    HypothesisGrid1D phi_grid;
    std::vector<double> density;  // phi_points x theta_points

    double at(int iphi, int itheta) const {
        return density[static_cast<std::size_t>(iphi) * theta_grid.values.size() + itheta];
    }
    double& at(int iphi, int itheta) {
        return density[static_cast<std::size_t>(iphi) * theta_grid.values.size() + itheta];
    }
    /// Total mass under the 2-D trapezoid rule.
    double mass() const;
};

/// Joint maximum-ignorance prior: flat in theta, 1/phi in phi, normalized on
/// the grid. Grids must span the config ranges exactly.
JointPosterior make_joint_mi_prior(const OpticalModelConfig& cfg,
                                   const HypothesisGrid1D& theta_grid,
                                   const HypothesisGrid1D& phi_grid);

/// Multiplies in the Poisson likelihood of one shot and renormalizes. Shots
/// without atoms inform phi only. Throws ZeroEvidence if the shot is
/// inconsistent with the whole support.
JointPosterior joint_update(const JointPosterior& post, const ShotRecord& shot,
                            const OpticalModelConfig& cfg);

/// Integrates phi out and renormalizes.
Posterior1D marginal_theta(const JointPosterior& post);

struct AtomEstimate {
    double estimate = 0.0;
    double error = 0.0;
    /// More than 5% of the theta-marginal mass sits in the outermost two grid
    /// cells on either end; the prior range is likely too small.
    bool edge_concentration = false;
};

/// kappa-scaled mean and standard deviation of the theta marginal.
AtomEstimate atom_estimate(const JointPosterior& post, const OpticalModelConfig& cfg);

struct MleEstimate {
    double estimate = 0.0;
    double error = 0.0;
};

/// Closed-form log-ratio estimator on dark-corrected count means:
///   estimate = (kappa / zeta) * ln(<n_b> / <n_a>)
/// with the error propagated to first order from the standard errors of the
/// means. Throws NonPositiveMean when a corrected mean is <= 0.
MleEstimate mle_estimate(std::span<const ShotRecord> shots_a, std::span<const ShotRecord> shots_b,
                         double zeta, double kappa);

}  // namespace metrology

#endif
