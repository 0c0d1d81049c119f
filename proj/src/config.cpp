#include "masr/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace masr {

namespace {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok)
        throw ConfigError("config field '" + field + "': " + what);
}

} // namespace

void ScenarioConfig::finalize() {
    max_power_w = dbm_to_watts(max_power_dbm);
    path_loss_linear = db_to_linear(path_loss_db);

    require(antenna_count >= 1, "antennas", "must be >= 1");
    require(path_count >= 1, "paths", "must be >= 1");
    require(wavelength > 0.0, "wavelength_m", "must be positive");
    require(region_side > 0.0, "region_side_m", "must be positive");
    require(std::isfinite(max_power_dbm), "p_max_dbm", "must be finite");
    require(reflection_efficiency >= 0.0 && reflection_efficiency <= 1.0,
            "reflection_efficiency", "must lie in [0, 1]");
    require(min_spacing >= 0.0, "d_min_m", "must be nonnegative");
    require(min_spacing < std::hypot(region_side, region_side),
            "d_min_m", "exceeds the region diagonal; no layout can satisfy it");
    require(std::isfinite(path_loss_db), "path_loss_db", "must be finite");
    require(path_loss_exponent > 0.0, "path_loss_exponent", "must be positive");
    require(noise_power > 0.0, "noise_power_w", "must be positive");
    require(ber_cap > 0.0 && ber_cap < 0.5, "ber_cap", "must lie in (0, 0.5)");
    require(swarm_size >= 1, "swarm_size", "must be >= 1");
    require(swarm_iterations >= 1, "swarm_iterations", "must be >= 1");
    require(inertia >= 0.0, "inertia", "must be nonnegative");
    require(cognitive_factor >= 0.0, "cognitive_factor", "must be nonnegative");
    require(social_factor >= 0.0, "social_factor", "must be nonnegative");
    require(penalty > 0.0, "penalty", "must be positive");
    require(initial_temperature > 0.0, "initial_temperature", "must be positive");
    require(convergence_tol > 0.0, "convergence_tol", "must be positive");
    require(max_outer_iterations >= 1, "max_outer_iterations", "must be >= 1");
    require(trials >= 1, "trials", "must be >= 1");
}

ScenarioConfig ScenarioConfig::defaults(Scale scale) {
    ScenarioConfig cfg;
    if (scale == Scale::Test) {
        cfg.swarm_size = 50;
        cfg.swarm_iterations = 50;
        cfg.trials = 20;
    }
    cfg.finalize();
    return cfg;
}

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config field '") + key + "': wrong type");
    }
}

} // namespace

ScenarioConfig parse_config(const std::string& text, Scale scale) {
    ScenarioConfig cfg = ScenarioConfig::defaults(scale);

    const bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
    if (blank)
        return cfg;

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");

    static const char* known[] = {
        "antennas", "paths", "wavelength_m", "region_side_m", "p_max_dbm",
        "reflection_efficiency", "d_min_m", "path_loss_db", "path_loss_exponent",
        "noise_power_w", "ber_cap", "swarm_size", "swarm_iterations", "inertia",
        "cognitive_factor", "social_factor", "penalty", "initial_temperature",
        "convergence_tol", "max_outer_iterations", "seed", "trials"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known)
            ok = ok || key == k;
        if (!ok)
            throw ConfigError("unknown config field '" + key + "'");
    }

    read_field(j, "antennas", cfg.antenna_count);
    read_field(j, "paths", cfg.path_count);
    read_field(j, "wavelength_m", cfg.wavelength);
    // Geometry defaults follow the wavelength unless given explicitly.
    if (j.contains("wavelength_m")) {
        cfg.region_side = 3.0 * cfg.wavelength;
        cfg.min_spacing = 0.5 * cfg.wavelength;
    }
    read_field(j, "region_side_m", cfg.region_side);
    read_field(j, "d_min_m", cfg.min_spacing);
    read_field(j, "p_max_dbm", cfg.max_power_dbm);
    read_field(j, "reflection_efficiency", cfg.reflection_efficiency);
    read_field(j, "path_loss_db", cfg.path_loss_db);
    read_field(j, "path_loss_exponent", cfg.path_loss_exponent);
    read_field(j, "noise_power_w", cfg.noise_power);
    read_field(j, "ber_cap", cfg.ber_cap);
    read_field(j, "swarm_size", cfg.swarm_size);
    read_field(j, "swarm_iterations", cfg.swarm_iterations);
    read_field(j, "inertia", cfg.inertia);
    read_field(j, "cognitive_factor", cfg.cognitive_factor);
    read_field(j, "social_factor", cfg.social_factor);
    read_field(j, "penalty", cfg.penalty);
    read_field(j, "initial_temperature", cfg.initial_temperature);
    read_field(j, "convergence_tol", cfg.convergence_tol);
    read_field(j, "max_outer_iterations", cfg.max_outer_iterations);
    read_field(j, "seed", cfg.seed);
    read_field(j, "trials", cfg.trials);

    cfg.finalize();
    return cfg;
}

ScenarioConfig load_config(const std::string& path, Scale scale) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), scale);
}

} // namespace masr
