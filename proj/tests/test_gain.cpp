#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "metrology/errors.hpp"
#include "metrology/gain.hpp"
#include "metrology/posterior.hpp"
#include "metrology/rng.hpp"

using namespace metrology;

namespace {

// Enumerates the gain from its definition over a full finite alphabet; no
// truncation machinery. Independent check of the production path.
double brute_force_gain(const Posterior1D& prior, const SymmetrySpec& spec,
                        const std::vector<std::vector<double>>& likelihood_rows) {
    const std::size_t alphabet = likelihood_rows.front().size();
    double gain = 0.0;
    for (std::size_t n = 0; n < alphabet; ++n) {
        double evidence = 0.0, numer = 0.0;
        for (std::size_t i = 0; i < prior.density.size(); ++i) {
            const double joint =
                prior.grid.weights[i] * prior.density[i] * likelihood_rows[i][n];
            evidence += joint;
            numer += joint * spec.f(prior.grid.values[i]);
        }
        if (evidence > 0.0) gain += numer * numer / evidence;
    }
    return gain;
}

double prior_f_mean(const Posterior1D& prior, const SymmetrySpec& spec) {
    double acc = 0.0;
    for (std::size_t i = 0; i < prior.density.size(); ++i) {
        acc += prior.grid.weights[i] * prior.density[i] * spec.f(prior.grid.values[i]);
    }
    return acc;
}

double prior_f2_mean(const Posterior1D& prior, const SymmetrySpec& spec) {
    double acc = 0.0;
    for (std::size_t i = 0; i < prior.density.size(); ++i) {
        const double f = spec.f(prior.grid.values[i]);
        acc += prior.grid.weights[i] * prior.density[i] * f * f;
    }
    return acc;
}

// Rows normalized so each hypothesis' outcome mass sums to exactly 1.0.
std::vector<std::vector<double>> random_likelihood_rows(SplitMix64& rng, std::size_t points,
                                                        std::size_t alphabet) {
    std::vector<std::vector<double>> rows(points, std::vector<double>(alphabet));
    for (auto& row : rows) {
        double sum = 0.0;
        for (double& v : row) {
            v = rng.next_double();
            sum += v;
        }
        double partial = 0.0;
        for (std::size_t n = 0; n + 1 < alphabet; ++n) {
            row[n] /= sum;
            partial += row[n];
        }
        row[alphabet - 1] = std::max(0.0, 1.0 - partial);
    }
    return rows;
}

}  // namespace

TEST_CASE("precision gain: theta-independent likelihood returns the prior term") {
    const auto grid = make_uniform_grid(0.0, 8.0, 101);
    const auto prior = make_mi_prior(SymmetrySpec::linear(), grid);
    // outcome pmf {0.5, 0.3, 0.2} whatever the hypothesis
    const auto like = [](int n, double) {
        switch (n) {
            case 0: return 0.5;
            case 1: return 0.3;
            case 2: return 0.2;
            default: return 0.0;
        }
    };
    const auto result = precision_gain(prior, SymmetrySpec::linear(), like, {0.99, 50});
    const double m1 = prior_f_mean(prior, SymmetrySpec::linear());
    CHECK(result.gain == doctest::Approx(m1 * m1).epsilon(1e-12));
    for (const OutcomeTerm& term : result.per_outcome_terms) {
        CHECK(term.estimate_f == doctest::Approx(m1).epsilon(1e-12));
    }
}

TEST_CASE("precision gain: point-mass prior cannot move") {
    const auto grid = make_uniform_grid(0.0, 8.0, 101);
    std::vector<double> density(101, 0.0);
    density[40] = 1.0;
    const auto prior = normalize(grid, std::move(density));
    const double theta0 = grid.values[40];
    const auto like = [](int n, double) { return n < 4 ? 0.25 : 0.0; };
    const auto result =
        precision_gain(prior, SymmetrySpec::linear(), like, {0.999999, 50});
    CHECK(result.gain == doctest::Approx(theta0 * theta0).epsilon(1e-12));
}

TEST_CASE("precision gain: deterministic two-point prior enumerates to 2.5") {
    // atoms at theta = 1 and theta = 2, equal mass; the outcome names the atom
    const auto grid = make_uniform_grid(0.0, 3.0, 4);  // values 0,1,2,3
    std::vector<double> density(4, 0.0);
    density[1] = 0.5 / grid.weights[1];
    density[2] = 0.5 / grid.weights[2];
    const auto prior = Posterior1D{grid, std::move(density)};
    const auto like = [](int n, double theta) {
        const int atom = theta < 1.5 ? 0 : 1;
        return n == atom ? 1.0 : 0.0;
    };
    const auto result = precision_gain(prior, SymmetrySpec::linear(), like, {0.99, 10});
    CHECK(result.gain == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(result.truncation_bound <= 2);
}

TEST_CASE("precision gain result satisfies its own decomposition") {
    const auto grid = make_uniform_grid(0.5, 4.0, 41);
    const auto prior = make_mi_prior(SymmetrySpec::logarithmic(), grid);
    SplitMix64 rng(99);
    const auto rows = random_likelihood_rows(rng, 41, 16);
    const auto like = [&rows, &grid](int n, double theta) {
        const std::size_t i =
            static_cast<std::size_t>(std::lround((theta - 0.5) / grid.spacing()));
        return rows[i][n];
    };
    const auto result =
        precision_gain(prior, SymmetrySpec::logarithmic(), like, {1.0 - 1e-12, 20});
    double reconstructed = 0.0, total_evidence = 0.0;
    for (const OutcomeTerm& term : result.per_outcome_terms) {
        reconstructed += term.evidence * term.estimate_f * term.estimate_f;
        total_evidence += term.evidence;
    }
    CHECK(result.gain == doctest::Approx(reconstructed).epsilon(1e-10));
    CHECK(total_evidence >= 0.99);
}

TEST_CASE("precision gain matches brute-force enumeration on small priors") {
    SplitMix64 rng(2024);
    const auto grid = make_uniform_grid(0.0, 1.0, 11);
    for (int trial = 0; trial < 25; ++trial) {
        // prior supported on <= 5 atoms
        std::vector<double> density(11, 0.0);
        const int atoms = 1 + static_cast<int>(rng.next_u64() % 5);
        for (int a = 0; a < atoms; ++a) {
            density[rng.next_u64() % 11] += rng.next_double() + 0.1;
        }
        const auto prior = normalize(grid, std::move(density));
        const std::size_t alphabet = 2 + rng.next_u64() % 49;
        const auto rows = random_likelihood_rows(rng, 11, alphabet);
        const auto like = [&rows, &grid](int n, double theta) {
            const std::size_t i = static_cast<std::size_t>(std::lround(theta / grid.spacing()));
            return static_cast<std::size_t>(n) < rows[i].size() ? rows[i][n] : 0.0;
        };
        const auto spec = SymmetrySpec::linear();
        const auto result = precision_gain(prior, spec, like, {1.0 - 1e-12, 100});
        const double oracle = brute_force_gain(prior, spec, rows);
        CHECK(result.gain == doctest::Approx(oracle).epsilon(1e-10));

        // Jensen lower bound and the loss decomposition
        const double m1 = prior_f_mean(prior, spec);
        const double m2 = prior_f2_mean(prior, spec);
        CHECK(result.gain >= m1 * m1 - 1e-9);
        CHECK(m2 - result.gain >= -1e-9);  // expected posterior loss stays nonnegative
    }
}

TEST_CASE("precision gain: unreachable coverage raises TruncationFailure") {
    const auto grid = make_uniform_grid(0.0, 8.0, 21);
    const auto prior = make_mi_prior(SymmetrySpec::linear(), grid);
    const auto like = [](int, double) { return 1.0 / 1000.0; };  // mass spread over 1000 outcomes
    CHECK_THROWS_AS(precision_gain(prior, SymmetrySpec::linear(), like, {0.99, 50}),
                    TruncationFailure);
}
