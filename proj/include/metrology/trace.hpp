#ifndef METROLOGY_TRACE_HPP
#define METROLOGY_TRACE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "metrology/absorption.hpp"

namespace metrology {

/// Ground truth for a simulated run.
struct TruthConfig {
    double phi_true = 18.0;
    double theta_true = 3.04;
    double dark_rate = 1.0;
    std::uint64_t seed = 1;

    void validate() const;  // throws ConfigError
};

enum class StrategyKind {
    OnResonanceMle,
    DetunedMle,
    OnResonanceBayes,
    AprioriBayes,
    AdaptiveBayes,
};

struct Strategy {
    StrategyKind kind = StrategyKind::AdaptiveBayes;
    double detuning = 5.0;  // only used by DetunedMle

    std::string name() const;
    static Strategy from_name(const std::string& name);  // throws ConfigError
    bool operator==(const Strategy& other) const { return kind == other.kind; }
};

/// All five strategies in canonical (reporting) order.
std::vector<Strategy> all_strategies();

/// Per-shot record of one strategy execution: 2*k shots (atom/no-atom pairs),
/// one estimate and error bar per pair. Invalid estimates are NaN.
struct RunTrace {
    Strategy strategy;
    std::uint64_t seed = 0;
    std::vector<ShotRecord> shots;
    std::vector<double> estimates;
    std::vector<double> errors;
    std::vector<double> detunings_used;
    bool aborted = false;
    std::string diagnostic;

    int k_max() const { return static_cast<int>(estimates.size()); }
};

}  // namespace metrology

#endif
