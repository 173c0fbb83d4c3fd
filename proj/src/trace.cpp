#include "metrology/trace.hpp"

#include "metrology/errors.hpp"

namespace metrology {

void TruthConfig::validate() const {
    if (!(phi_true > 0.0)) throw ConfigError("phi_true", "must be > 0");
    if (!(theta_true >= 0.0)) throw ConfigError("theta_true", "must be >= 0");
    if (!(dark_rate >= 0.0)) throw ConfigError("dark_rate", "must be >= 0");
}

std::string Strategy::name() const {
    switch (kind) {
        case StrategyKind::OnResonanceMle: return "on_resonance_mle";
        case StrategyKind::DetunedMle: return "detuned_mle";
        case StrategyKind::OnResonanceBayes: return "on_resonance_bayes";
        case StrategyKind::AprioriBayes: return "apriori_bayes";
        case StrategyKind::AdaptiveBayes: return "adaptive_bayes";
    }
    return "unknown";
}

Strategy Strategy::from_name(const std::string& name) {
    if (name == "on_resonance_mle" || name == "on_resonance") {
        return Strategy{StrategyKind::OnResonanceMle};
    }
    if (name == "detuned_mle" || name == "detuned") {
        return Strategy{StrategyKind::DetunedMle};
    }
    if (name == "on_resonance_bayes") {
        return Strategy{StrategyKind::OnResonanceBayes};
    }
    if (name == "apriori_bayes" || name == "apriori") {
        return Strategy{StrategyKind::AprioriBayes};
    }
    if (name == "adaptive_bayes" || name == "adaptive") {
        return Strategy{StrategyKind::AdaptiveBayes};
    }
    throw ConfigError("strategies", "unknown strategy '" + name + "'");
}

std::vector<Strategy> all_strategies() {
    return {Strategy{StrategyKind::OnResonanceMle}, Strategy{StrategyKind::DetunedMle},
            Strategy{StrategyKind::OnResonanceBayes}, Strategy{StrategyKind::AprioriBayes},
            Strategy{StrategyKind::AdaptiveBayes}};
}

}  // namespace metrology
