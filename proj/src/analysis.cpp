#include "metrology/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "metrology/errors.hpp"

namespace metrology {

double nsr(std::span<const double> estimates) {
    if (estimates.size() < 2) {
        throw std::invalid_argument("nsr: need at least 2 estimates");
    }
    double mean = 0.0;
    for (double e : estimates) {
        if (!std::isfinite(e)) throw std::invalid_argument("nsr: non-finite estimate");
        mean += e;
    }
    mean /= static_cast<double>(estimates.size());
    if (mean == 0.0) throw ZeroMean("nsr: mean estimate is zero");
    double var = 0.0;
    for (double e : estimates) {
        const double d = e - mean;
        var += d * d;
    }
    var /= static_cast<double>(estimates.size());  // population variance
    return var / (mean * mean);
}

int k_min(std::span<const double> trace_estimates, double fraction) {
    if (trace_estimates.empty()) {
        throw std::invalid_argument("k_min: empty trace");
    }
    const double final_estimate = trace_estimates.back();
    if (!(std::abs(final_estimate) > 0.0)) {
        throw std::invalid_argument("k_min: final estimate must be nonzero");
    }
    const double band = fraction * std::abs(final_estimate);
    const int n = static_cast<int>(trace_estimates.size());
    int k = n;  // final step always qualifies
    for (int i = n - 1; i >= 0; --i) {
        const double e = trace_estimates[i];
        const bool inside = std::isfinite(e) && std::abs(e - final_estimate) <= band;
        if (!inside) break;
        k = i + 1;
    }
    return k;
}

namespace {

struct Group {
    Strategy strategy;
    std::vector<const RunTrace*> traces;
};

std::vector<Group> group_by_strategy(std::span<const RunTrace> traces) {
    std::vector<Group> groups;
    for (const Strategy& s : all_strategies()) {
        Group g{s, {}};
        for (const RunTrace& t : traces) {
            if (t.strategy == s) g.traces.push_back(&t);
        }
        if (!g.traces.empty()) groups.push_back(std::move(g));
    }
    return groups;
}

}  // namespace

std::vector<StrategySummary> summarize(std::span<const RunTrace> traces, int at_k) {
    if (at_k < 1) throw std::invalid_argument("summarize: at_k must be >= 1");
    std::vector<StrategySummary> out;
    for (const Group& g : group_by_strategy(traces)) {
        StrategySummary row;
        row.strategy = g.strategy;
        std::vector<double> estimates, error_bars;
        double k_min_sum = 0.0;
        for (const RunTrace* t : g.traces) {
            if (t->k_max() < at_k) {
                throw std::invalid_argument("summarize: trace shorter than at_k for strategy " +
                                            g.strategy.name());
            }
            const double e = t->estimates[at_k - 1];
            if (!std::isfinite(e)) {
                ++row.excluded;
                continue;
            }
            estimates.push_back(e);
            if (std::isfinite(t->errors[at_k - 1])) error_bars.push_back(t->errors[at_k - 1]);
            k_min_sum += static_cast<double>(
                k_min(std::span<const double>(t->estimates.data(), at_k)));
        }
        row.m = static_cast<int>(estimates.size());
        if (row.m < 2) {
            throw InsufficientRepeats("summarize: strategy " + g.strategy.name() + " has m=" +
                                      std::to_string(row.m) + " usable traces at k=" +
                                      std::to_string(at_k));
        }
        double mean = 0.0;
        for (double e : estimates) mean += e;
        mean /= row.m;
        double var = 0.0;
        for (double e : estimates) var += (e - mean) * (e - mean);
        var /= row.m;
        row.mean_estimate = mean;
        row.std_estimate = std::sqrt(var);
        row.nsr_percent = 100.0 * nsr(estimates);
        double bar = 0.0;
        for (double b : error_bars) bar += b;
        row.mean_error_bar = error_bars.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                : bar / static_cast<double>(error_bars.size());
        row.k_min_mean = k_min_sum / row.m;
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<NsrPoint> nsr_series(std::span<const RunTrace> traces) {
    std::vector<NsrPoint> out;
    for (const Group& g : group_by_strategy(traces)) {
        int longest = 0;
        for (const RunTrace* t : g.traces) longest = std::max(longest, t->k_max());
        for (int k = 1; k <= longest; ++k) {
            std::vector<double> estimates;
            for (const RunTrace* t : g.traces) {
                if (t->k_max() >= k && std::isfinite(t->estimates[k - 1])) {
                    estimates.push_back(t->estimates[k - 1]);
                }
            }
            NsrPoint point{g.strategy, k, std::numeric_limits<double>::quiet_NaN()};
            if (estimates.size() >= 2) point.nsr = nsr(estimates);
            out.push_back(point);
        }
    }
    return out;
}

}  // namespace metrology
