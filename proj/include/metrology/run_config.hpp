#ifndef METROLOGY_RUN_CONFIG_HPP
#define METROLOGY_RUN_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "metrology/absorption.hpp"
#include "metrology/controller.hpp"
#include "metrology/trace.hpp"

namespace metrology {

/// Everything a run needs, assembled from defaults, an optional key=value
/// config file and command-line overrides. Every key has a default.
struct RunConfig {
    OpticalModelConfig model;
    TruthConfig truth;
    double detuning_min = 0.0;
    double detuning_max = 6.0;
    int detuning_points = 13;
    double outcome_mass_threshold = 0.99;
    double density_truncation = 0.01;
    int max_outcome = 400;
    double detuned_mle_detuning = 5.0;
    std::vector<Strategy> strategies = all_strategies();
    int k_max = 30;
    int repeats = 16;
    std::uint64_t seed = 1;
    std::string output_dir = "out";

    /// Controller assembled from the detuning/truncation fields.
    ControllerConfig controller() const;

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    /// Applies one `key=value` override. Unknown keys and unparseable values
    /// throw ConfigError naming the key.
    void set(const std::string& key, const std::string& value);

    nlohmann::json to_json() const;
};

/// Parses a config file of `key = value` lines (# starts a comment) over the
/// defaults, then applies overrides of the form `key=value`. Validates.
RunConfig load_run_config(const std::filesystem::path* config_path,
                          std::span<const std::string> overrides);

}  // namespace metrology

#endif
