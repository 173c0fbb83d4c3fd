// atomest: simulate absorption-based atom-number measurements, estimate from
// recorded shot logs, and inspect the detuning gain curve.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metrology/analysis.hpp"
#include "metrology/controller.hpp"
#include "metrology/errors.hpp"
#include "metrology/io.hpp"
#include "metrology/rng.hpp"
#include "metrology/run_config.hpp"
#include "metrology/simulator.hpp"
#include "metrology/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace metrology;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitBadLog = 4;

int thread_budget(int tasks) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("METROLOGY_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return static_cast<int>(std::min<unsigned>(n, static_cast<unsigned>(tasks)));
}

RunConfig load_or_exit(const std::optional<std::string>& config_path,
                       const std::vector<std::string>& overrides) {
    const fs::path path = config_path.value_or("");
    const fs::path* ptr = config_path ? &path : nullptr;
    return load_run_config(ptr, overrides);
}

json trace_to_json(const RunTrace& trace) {
    json j;
    j["strategy"] = trace.strategy.name();
    j["seed"] = trace.seed;
    j["estimates"] = trace.estimates;
    j["errors"] = trace.errors;
    j["detunings_mhz"] = trace.detunings_used;
    j["aborted"] = trace.aborted;
    if (trace.aborted) j["diagnostic"] = trace.diagnostic;
    json shots = json::array();
    for (const ShotRecord& s : trace.shots) {
        shots.push_back({{"detuning_mhz", s.detuning},
                         {"atoms_present", s.atoms_present},
                         {"raw_count", s.raw_count},
                         {"corrected_count", s.corrected_count}});
    }
    j["shots"] = std::move(shots);
    return j;
}

int cmd_simulate(const RunConfig& cfg, bool emit_json, bool emit_svg) {
    const ControllerConfig controller = cfg.controller();
    const int n_strategies = static_cast<int>(cfg.strategies.size());
    const int tasks = n_strategies * cfg.repeats;

    std::vector<std::vector<RunTrace>> results(n_strategies);
    for (auto& r : results) r.resize(cfg.repeats);

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const int task = next.fetch_add(1);
            if (task >= tasks || failed.load()) break;
            const int si = task / cfg.repeats;
            const int rep = task % cfg.repeats;
            Strategy strategy = cfg.strategies[si];
            if (strategy.kind == StrategyKind::DetunedMle) {
                strategy.detuning = cfg.detuned_mle_detuning;
            }
            TruthConfig truth = cfg.truth;
            truth.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
            try {
                results[si][rep] = run_strategy(strategy, truth, cfg.k_max, controller, cfg.model);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failure = strategy.name() + " repeat " + std::to_string(rep) + ": " + e.what();
                failed.store(true);
                break;
            }
        }
    };
    const int n_threads = thread_budget(tasks);
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) {
        std::cerr << "error: " << failure << "\n";
        return kExitRuntime;
    }

    const fs::path out_dir = cfg.output_dir;
    std::vector<RunTrace> all;
    for (int si = 0; si < n_strategies; ++si) {
        const std::string name = cfg.strategies[si].name();
        write_traces_csv(out_dir / ("trace_" + name + ".csv"), results[si]);
        if (emit_json) {
            json j;
            j["config"] = cfg.to_json();
            j["traces"] = json::array();
            for (const RunTrace& t : results[si]) j["traces"].push_back(trace_to_json(t));
            atomic_write_text(out_dir / ("trace_" + name + ".json"), j.dump(2) + "\n");
        }
        all.insert(all.end(), results[si].begin(), results[si].end());
    }

    try {
        const std::vector<StrategySummary> summary = summarize(all, cfg.k_max);
        const std::vector<NsrPoint> series = nsr_series(all);
        atomic_write_text(out_dir / "summary.csv", summaries_to_csv(summary));
        atomic_write_text(out_dir / "nsr_vs_k.csv", nsr_series_to_csv(series));
        if (emit_json) {
            json j;
            j["config"] = cfg.to_json();
            for (const StrategySummary& row : summary) {
                j["summary"].push_back({{"strategy", row.strategy.name()},
                                        {"m", row.m},
                                        {"mean_estimate", row.mean_estimate},
                                        {"std_estimate", row.std_estimate},
                                        {"nsr_percent", row.nsr_percent},
                                        {"mean_error_bar", row.mean_error_bar},
                                        {"k_min_mean", row.k_min_mean},
                                        {"excluded", row.excluded}});
            }
            atomic_write_text(out_dir / "summary.json", j.dump(2) + "\n");
        }
        if (emit_svg) {
            std::vector<PlotSeries> nsr_plot;
            for (const Strategy& s : cfg.strategies) {
                PlotSeries ps;
                ps.label = s.name();
                for (const NsrPoint& p : series) {
                    if (p.strategy == s) {
                        ps.x.push_back(p.k);
                        ps.y.push_back(p.nsr);
                    }
                }
                nsr_plot.push_back(std::move(ps));
            }
            atomic_write_text(out_dir / "nsr_vs_k.svg",
                              render_line_plot(nsr_plot, "noise-to-signal ratio vs shots", "k",
                                               "NSR", true));
            std::vector<PlotSeries> est_plot;
            std::vector<std::vector<double>> est_err;
            for (int si = 0; si < n_strategies; ++si) {
                PlotSeries ps;
                ps.label = cfg.strategies[si].name();
                std::vector<double> err;
                for (int rep = 0; rep < cfg.repeats; ++rep) {
                    const RunTrace& t = results[si][rep];
                    if (t.k_max() == 0) continue;
                    ps.x.push_back(si + 1 + 0.8 * (rep + 0.5) / cfg.repeats - 0.4);
                    ps.y.push_back(t.estimates.back());
                    err.push_back(t.errors.back());
                }
                est_plot.push_back(std::move(ps));
                est_err.push_back(std::move(err));
            }
            atomic_write_text(out_dir / "estimates.svg",
                              render_scatter_plot(est_plot, est_err, "final estimates by strategy",
                                                  "strategy", "atom number"));
        }
        std::cout << summaries_to_table(summary);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    std::cout << "wrote " << (out_dir / "summary.csv").string() << "\n";
    return 0;
}

int cmd_estimate(const RunConfig& cfg, const std::string& log_path, bool emit_json) {
    std::vector<ShotRecord> shots;
    try {
        shots = read_shot_log_csv(log_path, cfg.model.dark_rate);
    } catch (const CsvError& e) {
        std::cerr << "error: " << log_path << ": " << e.what() << "\n";
        return kExitBadLog;
    }

    std::vector<ShotRecord> shots_a, shots_b;
    for (const ShotRecord& s : shots) (s.atoms_present ? shots_a : shots_b).push_back(s);

    json j;
    try {
        const auto theta_grid =
            make_uniform_grid(cfg.model.theta_min, cfg.model.theta_max, cfg.model.theta_points);
        const auto phi_grid =
            make_uniform_grid(cfg.model.phi_min, cfg.model.phi_max, cfg.model.phi_points);
        JointPosterior post = make_joint_mi_prior(cfg.model, theta_grid, phi_grid);
        for (const ShotRecord& s : shots) post = joint_update(post, s, cfg.model);
        const AtomEstimate bayes = atom_estimate(post, cfg.model);
        std::cout << "bayesian: " << format_double(bayes.estimate) << " +- "
                  << format_double(bayes.error) << "\n";
        if (bayes.edge_concentration) {
            std::cout << "warning: posterior mass concentrates at the hypothesis-range edge; "
                         "widen theta/phi ranges\n";
        }
        j["bayesian"] = {{"estimate", bayes.estimate},
                         {"error", bayes.error},
                         {"edge_concentration", bayes.edge_concentration}};
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }

    if (shots_a.empty() || shots_b.empty()) {
        std::cout << "mle: undefined (log lacks atom or no-atom shots)\n";
        j["mle"] = nullptr;
    } else {
        bool mixed = false;
        for (const ShotRecord& s : shots_a) {
            if (std::abs(s.detuning - shots_a.front().detuning) > 1e-9) mixed = true;
        }
        if (mixed) {
            std::cerr << "note: atom-shot detunings vary; the log-ratio estimate assumes a fixed "
                         "frequency and uses the first one\n";
        }
        const double zeta = lorentzian_zeta({cfg.model.gamma_fwhm, shots_a.front().detuning});
        try {
            const MleEstimate mle = mle_estimate(shots_a, shots_b, zeta, cfg.model.kappa);
            std::cout << "mle: " << format_double(mle.estimate) << " +- "
                      << format_double(mle.error) << "\n";
            j["mle"] = {{"estimate", mle.estimate}, {"error", mle.error}};
        } catch (const NonPositiveMean&) {
            std::cout << "mle: undefined (dark-corrected mean <= 0)\n";
            j["mle"] = nullptr;
        }
    }
    if (emit_json) std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_gain_curve(const RunConfig& cfg, int k, bool emit_json) {
    try {
        const auto theta_grid =
            make_uniform_grid(cfg.model.theta_min, cfg.model.theta_max, cfg.model.theta_points);
        const auto phi_grid =
            make_uniform_grid(cfg.model.phi_min, cfg.model.phi_max, cfg.model.phi_points);
        JointPosterior post = make_joint_mi_prior(cfg.model, theta_grid, phi_grid);
        const ControllerConfig controller = cfg.controller();
        if (k > 0) {
            TruthConfig truth = cfg.truth;
            truth.seed = derive_seed(cfg.seed, 0);
            const RunTrace trace = run_adaptive_episode(truth, k, truth.seed, controller, cfg.model);
            for (const ShotRecord& s : trace.shots) post = joint_update(post, s, cfg.model);
        }
        const GainCurve curve = select_detuning(post, controller, cfg.model);
        const fs::path out = fs::path(cfg.output_dir) / "gain_curve.csv";
        atomic_write_text(out, gain_curve_to_csv(curve.detunings, curve.gains));
        std::cout << "argmax_detuning_mhz: " << format_double(curve.argmax_detuning) << "\n"
                  << "argmax_gain: " << format_double(curve.argmax_gain) << "\n"
                  << "wrote " << out.string() << "\n";
        if (emit_json) {
            json j;
            j["config"] = cfg.to_json();
            j["k"] = k;
            j["detunings_mhz"] = curve.detunings;
            j["gains"] = curve.gains;
            j["argmax_detuning_mhz"] = curve.argmax_detuning;
            j["argmax_gain"] = curve.argmax_gain;
            atomic_write_text(fs::path(cfg.output_dir) / "gain_curve.json", j.dump(2) + "\n");
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive Bayesian atom-number metrology toolkit"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    std::vector<std::string> overrides;
    bool emit_json = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_option("--set", overrides, "override a config key (key=value)");
        sub->add_flag("--json", emit_json, "also emit JSON mirrors");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run the strategy comparison");
    bool emit_svg = false;
    std::optional<std::string> opt_strategies, opt_output;
    std::optional<int> opt_repeats, opt_kmax;
    std::optional<std::uint64_t> opt_seed;
    add_common(simulate);
    simulate->add_flag("--svg", emit_svg, "emit SVG plots");
    simulate->add_option("--strategies", opt_strategies, "comma list of strategies");
    simulate->add_option("--repeats", opt_repeats, "repeats per strategy");
    simulate->add_option("--seed", opt_seed, "master seed");
    simulate->add_option("--k-max", opt_kmax, "shot pairs per run");
    simulate->add_option("--output-dir", opt_output, "output directory");

    CLI::App* estimate = app.add_subcommand("estimate", "estimate from a recorded shot log");
    std::string log_path;
    estimate->add_option("log", log_path, "shot log CSV")->required();
    add_common(estimate);

    CLI::App* gain = app.add_subcommand("gain-curve", "gain versus detuning for the belief after k shots");
    int gain_k = 0;
    std::optional<std::string> gain_output;
    add_common(gain);
    gain->add_option("--k", gain_k, "simulated shot pairs before the curve (0 = prior)");
    gain->add_option("--output-dir", gain_output, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            if (opt_strategies) overrides.push_back("strategies=" + *opt_strategies);
            if (opt_repeats) overrides.push_back("repeats=" + std::to_string(*opt_repeats));
            if (opt_seed) overrides.push_back("seed=" + std::to_string(*opt_seed));
            if (opt_kmax) overrides.push_back("k_max=" + std::to_string(*opt_kmax));
            if (opt_output) overrides.push_back("output_dir=" + *opt_output);
            return cmd_simulate(load_or_exit(config_path, overrides), emit_json, emit_svg);
        }
        if (estimate->parsed()) {
            return cmd_estimate(load_or_exit(config_path, overrides), log_path, emit_json);
        }
        if (gain->parsed()) {
            if (gain_k < 0) throw ConfigError("k", "must be >= 0");
            if (gain_output) overrides.push_back("output_dir=" + *gain_output);
            return cmd_gain_curve(load_or_exit(config_path, overrides), gain_k, emit_json);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
