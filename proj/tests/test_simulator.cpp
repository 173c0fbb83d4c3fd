#include <doctest.h>

#include <cmath>
#include <vector>

#include "metrology/errors.hpp"
#include "metrology/rng.hpp"
#include "metrology/simulator.hpp"

using namespace metrology;

namespace {

OpticalModelConfig default_model() { return OpticalModelConfig{}; }

}  // namespace

TEST_CASE("splitmix64 reference sequence") {
    // first outputs for seed 1234567 published with the algorithm
    SplitMix64 rng(1234567);
    CHECK(rng.next_u64() == 6457827717110365317ULL);
    CHECK(rng.next_u64() == 3203168211198807973ULL);
    // doubles stay in [0, 1)
    SplitMix64 u(9);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.next_double();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("poisson sampler matches its mean and variance") {
    SplitMix64 rng(314159);
    const double mean = 18.0 * std::exp(-3.0) + 1.0;  // 1.896168
    const int n = 100000;
    double acc = 0.0, acc2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const int v = rng.poisson(mean);
        acc += v;
        acc2 += static_cast<double>(v) * v;
    }
    const double sample_mean = acc / n;
    const double sample_var = acc2 / n - sample_mean * sample_mean;
    CHECK(std::abs(sample_mean - mean) < 3.0 * std::sqrt(mean / n));
    CHECK(std::abs(sample_var - mean) / mean < 0.05);
    CHECK(rng.draws() == n);

    // mean above the product-method cutoff goes through the splitting path
    SplitMix64 big(2718);
    double big_acc = 0.0;
    for (int i = 0; i < 20000; ++i) big_acc += big.poisson(75.0);
    CHECK(std::abs(big_acc / 20000 - 75.0) < 3.0 * std::sqrt(75.0 / 20000));
}

TEST_CASE("draw_shot: no atoms and zero depth are the same distribution") {
    const auto cfg = default_model();
    const TruthConfig truth{18.0, 0.0, 1.0, 5};
    SplitMix64 r1(99), r2(99);
    for (int i = 0; i < 200; ++i) {
        const auto with_atoms = draw_shot(truth, 1.3, true, r1, cfg);
        const auto without = draw_shot(truth, 1.3, false, r2, cfg);
        CHECK(with_atoms.raw_count == without.raw_count);
    }
}

TEST_CASE("draw_shot corrects with the dark rate") {
    const auto cfg = default_model();
    const TruthConfig truth{18.0, 3.0, 1.0, 5};
    SplitMix64 rng(7);
    const auto shot = draw_shot(truth, 0.0, true, rng, cfg);
    CHECK(shot.corrected_count == doctest::Approx(shot.raw_count - 1.0));
    CHECK(shot.detuning == 0.0);
}

TEST_CASE("run_strategy: every strategy consumes the same shot budget") {
    const auto cfg = default_model();
    const auto ctl = ControllerConfig::defaults();
    const TruthConfig truth{18.0, 3.04, cfg.dark_rate, 2025};
    const int k_max = 5;
    for (const Strategy& s : all_strategies()) {
        const auto trace = run_strategy(s, truth, k_max, ctl, cfg);
        CHECK(trace.shots.size() == 2 * k_max);
        CHECK(trace.estimates.size() == k_max);
        CHECK(trace.errors.size() == k_max);
        CHECK(trace.detunings_used.size() == k_max);
        CHECK(trace.seed == 2025);
        for (int k = 0; k < k_max; ++k) {
            CHECK(trace.shots[2 * k].atoms_present);
            CHECK_FALSE(trace.shots[2 * k + 1].atoms_present);
        }
    }
}

TEST_CASE("run_strategy: traces are bit-identical across runs") {
    const auto cfg = default_model();
    const auto ctl = ControllerConfig::defaults();
    const TruthConfig truth{18.0, 3.04, cfg.dark_rate, 777};
    for (const Strategy& s : all_strategies()) {
        const auto t1 = run_strategy(s, truth, 4, ctl, cfg);
        const auto t2 = run_strategy(s, truth, 4, ctl, cfg);
        for (std::size_t i = 0; i < t1.shots.size(); ++i) {
            CHECK(t1.shots[i].raw_count == t2.shots[i].raw_count);
        }
        for (std::size_t i = 0; i < t1.estimates.size(); ++i) {
            const bool same = t1.estimates[i] == t2.estimates[i] ||
                              (std::isnan(t1.estimates[i]) && std::isnan(t2.estimates[i]));
            CHECK(same);
            CHECK(t1.detunings_used[i] == t2.detunings_used[i]);
        }
    }
}

TEST_CASE("strategy frequencies: fixed versus adaptive") {
    const auto cfg = default_model();
    const auto ctl = ControllerConfig::defaults();
    const TruthConfig truth{18.0, 3.04, cfg.dark_rate, 91};

    const auto onres = run_strategy(Strategy{StrategyKind::OnResonanceMle}, truth, 3, ctl, cfg);
    for (double d : onres.detunings_used) CHECK(d == 0.0);

    const auto detuned = run_strategy(Strategy{StrategyKind::DetunedMle}, truth, 3, ctl, cfg);
    for (double d : detuned.detunings_used) CHECK(d == 5.0);

    const auto apriori = run_strategy(Strategy{StrategyKind::AprioriBayes}, truth, 3, ctl, cfg);
    CHECK(apriori.detunings_used[0] == apriori.detunings_used[1]);
    CHECK(apriori.detunings_used[0] == apriori.detunings_used[2]);
    CHECK(apriori.detunings_used[0] > 0.0);

    const auto adaptive = run_strategy(Strategy{StrategyKind::AdaptiveBayes}, truth, 3, ctl, cfg);
    CHECK(adaptive.detunings_used[0] == apriori.detunings_used[0]);  // same prior, same start
}

TEST_CASE("a-priori selection lands on the dark-free optimum") {
    OpticalModelConfig cfg = default_model();
    cfg.dark_rate = 0.0;
    const auto ctl = ControllerConfig::defaults();
    const TruthConfig truth{18.0, 3.04, 0.0, 8};
    const auto trace = run_strategy(Strategy{StrategyKind::AprioriBayes}, truth, 1, ctl, cfg);
    CHECK(trace.detunings_used[0] == doctest::Approx(1.95).epsilon(0.11));
}

TEST_CASE("closed-form strategy converges to the known value at large k") {
    OpticalModelConfig cfg = default_model();
    cfg.dark_rate = 0.0;
    const auto ctl = ControllerConfig::defaults();
    const TruthConfig truth{18.1, 3.2527, 0.0, 424242};
    const auto trace = run_strategy(Strategy{StrategyKind::OnResonanceMle}, truth, 10000, ctl, cfg);
    const double expected = 84.9 * 3.2527;  // 276.15
    CHECK(std::abs(trace.estimates.back() - expected) <= 3.0 * trace.errors.back());
    CHECK(trace.errors.back() < 2.0);
}

TEST_CASE("dark overcorrection surfaces as missing estimates, then recovers") {
    OpticalModelConfig cfg = default_model();
    cfg.dark_rate = 3.0;
    const auto ctl = ControllerConfig::defaults();
    int traces_with_invalid = 0;
    int finite_finals = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const TruthConfig truth{8.0, 2.2, 3.0, seed};
        const auto trace =
            run_strategy(Strategy{StrategyKind::OnResonanceMle}, truth, 200, ctl, cfg);
        bool any_invalid = false;
        for (double e : trace.estimates) any_invalid = any_invalid || std::isnan(e);
        if (any_invalid) ++traces_with_invalid;
        if (std::isfinite(trace.estimates.back())) ++finite_finals;
    }
    CHECK(traces_with_invalid >= 3);  // low corrected means do strike early
    CHECK(finite_finals >= 8);        // and the estimator recovers by k = 200
}

TEST_SUITE("slow") {

TEST_CASE("all strategies are unbiased at scale") {
    OpticalModelConfig cfg = default_model();
    cfg.theta_points = 201;  // coarser grids keep the long runs affordable
    cfg.phi_points = 101;
    const auto ctl = ControllerConfig::defaults();
    const int k_max = 500;
    const int seeds = 50;
    const double target = cfg.kappa * 3.04;
    for (const Strategy& s : all_strategies()) {
        std::vector<double> finals;
        for (int i = 0; i < seeds; ++i) {
            TruthConfig truth{18.0, 3.04, cfg.dark_rate, derive_seed(909090, i)};
            const auto trace = run_strategy(s, truth, k_max, ctl, cfg);
            if (std::isfinite(trace.estimates.back())) finals.push_back(trace.estimates.back());
        }
        REQUIRE(finals.size() >= 45);
        double mean = 0.0;
        for (double e : finals) mean += e;
        mean /= finals.size();
        double var = 0.0;
        for (double e : finals) var += (e - mean) * (e - mean);
        var /= (finals.size() - 1);
        const double se = std::sqrt(var / finals.size());
        INFO(s.name(), ": mean=", mean, " se=", se);
        CHECK(std::abs(mean - target) <= 3.0 * se);
    }
}

TEST_CASE("bayesian and closed-form paths agree after 200 on-resonance pairs") {
    OpticalModelConfig cfg = default_model();
    cfg.dark_rate = 0.0;
    const auto ctl = ControllerConfig::defaults();
    const TruthConfig truth{18.0, 3.0, 0.0, 55555};
    const auto bayes = run_strategy(Strategy{StrategyKind::OnResonanceBayes}, truth, 200, ctl, cfg);
    const auto mle = run_strategy(Strategy{StrategyKind::OnResonanceMle}, truth, 200, ctl, cfg);
    const double target = cfg.kappa * 3.0;
    const double combined =
        std::sqrt(bayes.errors.back() * bayes.errors.back() + mle.errors.back() * mle.errors.back());
    CHECK(std::abs(bayes.estimates.back() - target) <= 3.0 * bayes.errors.back());
    CHECK(std::abs(mle.estimates.back() - target) <= 3.0 * mle.errors.back());
    CHECK(std::abs(bayes.estimates.back() - mle.estimates.back()) <= 3.0 * combined);
}

}  // TEST_SUITE("slow")
