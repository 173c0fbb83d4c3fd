#include "metrology/run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "metrology/errors.hpp"

namespace metrology {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v)) {
        throw ConfigError(key, "'" + value + "' is not a number");
    }
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) throw ConfigError(key, "'" + value + "' is not an integer");
    return static_cast<long long>(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    if (value.empty()) throw ConfigError(key, "missing value");
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    // strtoull silently wraps negative input
    if (end != value.c_str() + value.size() || value.find('-') != std::string::npos) {
        throw ConfigError(key, "'" + value + "' is not an unsigned integer");
    }
    return static_cast<std::uint64_t>(v);
}

std::vector<Strategy> parse_strategies(const std::string& value) {
    std::vector<Strategy> out;
    std::istringstream in(value);
    std::string token;
    while (std::getline(in, token, ',')) {
        token = trim(token);
        if (!token.empty()) out.push_back(Strategy::from_name(token));
    }
    if (out.empty()) throw ConfigError("strategies", "no strategies listed");
    return out;
}

}  // namespace

ControllerConfig RunConfig::controller() const {
    ControllerConfig cfg;
    cfg.detuning_candidates.resize(detuning_points);
    const double step =
        detuning_points > 1 ? (detuning_max - detuning_min) / (detuning_points - 1) : 0.0;
    for (int i = 0; i < detuning_points; ++i) {
        cfg.detuning_candidates[i] = detuning_min + step * i;
    }
    cfg.outcome_mass_threshold = outcome_mass_threshold;
    cfg.density_truncation = density_truncation;
    cfg.max_outcome = max_outcome;
    return cfg;
}

void RunConfig::validate() const {
    model.validate();
    truth.validate();
    if (!(detuning_min >= 0.0)) throw ConfigError("detuning_min_mhz", "must be >= 0");
    if (!(detuning_min < detuning_max)) throw ConfigError("detuning_max_mhz", "must exceed detuning_min_mhz");
    if (detuning_points < 1) throw ConfigError("detuning_points", "must be >= 1");
    if (!(detuned_mle_detuning >= 0.0)) throw ConfigError("detuned_mle_detuning_mhz", "must be >= 0");
    controller().validate();
    if (k_max < 1) throw ConfigError("k_max", "must be >= 1");
    if (repeats < 1) throw ConfigError("repeats", "must be >= 1");
    if (strategies.empty()) throw ConfigError("strategies", "must be nonempty");
    if (output_dir.empty()) throw ConfigError("output_dir", "must be nonempty");
    if (!(truth.phi_true >= model.phi_min && truth.phi_true <= model.phi_max)) {
        throw ConfigError("phi_true", "must lie inside [phi_min, phi_max]");
    }
    if (!(truth.theta_true >= model.theta_min && truth.theta_true <= model.theta_max)) {
        throw ConfigError("theta_true", "must lie inside [theta_min, theta_max]");
    }
}

void RunConfig::set(const std::string& key, const std::string& raw_value) {
    const std::string value = trim(raw_value);
    if (value.empty()) throw ConfigError(key, "missing value");
    if (key == "kappa") model.kappa = parse_double(key, value);
    else if (key == "gamma_fwhm_mhz") model.gamma_fwhm = parse_double(key, value);
    else if (key == "dark_rate") {
        model.dark_rate = parse_double(key, value);
        truth.dark_rate = model.dark_rate;
    } else if (key == "phi_min") model.phi_min = parse_double(key, value);
    else if (key == "phi_max") model.phi_max = parse_double(key, value);
    else if (key == "theta_min") model.theta_min = parse_double(key, value);
    else if (key == "theta_max") model.theta_max = parse_double(key, value);
    else if (key == "theta_points") model.theta_points = static_cast<int>(parse_int(key, value));
    else if (key == "phi_points") model.phi_points = static_cast<int>(parse_int(key, value));
    else if (key == "phi_true") truth.phi_true = parse_double(key, value);
    else if (key == "theta_true") truth.theta_true = parse_double(key, value);
    else if (key == "seed") {
        seed = parse_u64(key, value);
        truth.seed = seed;
    } else if (key == "detuning_min_mhz") detuning_min = parse_double(key, value);
    else if (key == "detuning_max_mhz") detuning_max = parse_double(key, value);
    else if (key == "detuning_points") detuning_points = static_cast<int>(parse_int(key, value));
    else if (key == "outcome_mass_threshold") outcome_mass_threshold = parse_double(key, value);
    else if (key == "density_truncation") density_truncation = parse_double(key, value);
    else if (key == "max_outcome") max_outcome = static_cast<int>(parse_int(key, value));
    else if (key == "detuned_mle_detuning_mhz") detuned_mle_detuning = parse_double(key, value);
    else if (key == "strategies") strategies = parse_strategies(value);
    else if (key == "k_max") k_max = static_cast<int>(parse_int(key, value));
    else if (key == "repeats") repeats = static_cast<int>(parse_int(key, value));
    else if (key == "output_dir") output_dir = value;
    else throw ConfigError(key, "unknown key");
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["kappa"] = model.kappa;
    j["gamma_fwhm_mhz"] = model.gamma_fwhm;
    j["resonance_frequency_thz"] = kResonanceFrequencyTHz;
    j["dark_rate"] = model.dark_rate;
    j["phi_min"] = model.phi_min;
    j["phi_max"] = model.phi_max;
    j["theta_min"] = model.theta_min;
    j["theta_max"] = model.theta_max;
    j["theta_points"] = model.theta_points;
    j["phi_points"] = model.phi_points;
    j["phi_true"] = truth.phi_true;
    j["theta_true"] = truth.theta_true;
    j["seed"] = seed;
    j["detuning_min_mhz"] = detuning_min;
    j["detuning_max_mhz"] = detuning_max;
    j["detuning_points"] = detuning_points;
    j["outcome_mass_threshold"] = outcome_mass_threshold;
    j["density_truncation"] = density_truncation;
    j["max_outcome"] = max_outcome;
    j["detuned_mle_detuning_mhz"] = detuned_mle_detuning;
    std::vector<std::string> names;
    for (const Strategy& s : strategies) names.push_back(s.name());
    j["strategies"] = names;
    j["k_max"] = k_max;
    j["repeats"] = repeats;
    j["output_dir"] = output_dir;
    return j;
}

RunConfig load_run_config(const std::filesystem::path* config_path,
                          std::span<const std::string> overrides) {
    RunConfig cfg;
    if (config_path) {
        std::ifstream in(*config_path);
        if (!in) throw ConfigError("config", "cannot open " + config_path->string());
        std::string line;
        long line_number = 0;
        while (std::getline(in, line)) {
            ++line_number;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("config", "line " + std::to_string(line_number) +
                                                ": expected key = value");
            }
            cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
    }
    for (const std::string& override_kv : overrides) {
        const auto eq = override_kv.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("set", "override '" + override_kv + "' must be key=value");
        }
        cfg.set(trim(override_kv.substr(0, eq)), trim(override_kv.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

}  // namespace metrology
