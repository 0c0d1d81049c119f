#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace masr {

/// Rectangular antenna placement region, local coordinates in meters.
struct PlacementRegion {
    double x_min = -0.15;
    double x_max = 0.15;
    double y_min = -0.15;
    double y_max = 0.15;

    static PlacementRegion centered_square(double side) {
        return {-0.5 * side, 0.5 * side, -0.5 * side, 0.5 * side};
    }

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }

    bool contains(double x, double y) const {
        return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
    }
};

/// Thrown by config parsing/validation; message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Scale { Paper, Test };

/// All physical and algorithmic parameters of one experiment.
///
/// Powers and gains are stored both as configured (dBm / dB) and as linear
/// values; the conversion happens exactly once, in finalize().
struct ScenarioConfig {
    // Physical layer
    int antenna_count = 4;              // transmit antennas K
    int path_count = 9;                 // propagation paths L per link
    double wavelength = 0.1;            // carrier wavelength, m
    double region_side = 0.3;           // placement square side, m (3 wavelengths)
    double max_power_dbm = 38.0;        // transmit power budget
    double reflection_efficiency = 0.8; // backscatter reflection efficiency
    double min_spacing = 0.05;          // minimum antenna separation, m (half wavelength)
    double path_loss_db = -10.0;        // reference path loss
    double path_loss_exponent = 1.8;
    double noise_power = 1e-8;          // receiver noise power, W
    double ber_cap = 0.1;               // max allowed backscatter-link BER

    // Swarm search
    int swarm_size = 150;
    int swarm_iterations = 150;
    double inertia = 1.2;
    double cognitive_factor = 1.4;
    double social_factor = 1.4;
    double penalty = 50.0;              // constraint penalty, bits
    double initial_temperature = 1.0;   // annealing start, bits

    // Alternating optimization
    double convergence_tol = 1e-2;      // rate change threshold, bits
    int max_outer_iterations = 20;

    // Experiment harness
    std::uint64_t seed = 1;
    int trials = 50;

    // Linear values, filled by finalize().
    double max_power_w = 0.0;
    double path_loss_linear = 0.0;

    PlacementRegion region() const {
        return PlacementRegion::centered_square(region_side);
    }

    /// Convert dB-domain fields to linear and validate everything.
    /// Throws ConfigError naming the first bad field.
    void finalize();

    static ScenarioConfig defaults(Scale scale = Scale::Paper);
};

/// Parse a JSON config file on top of the scale's defaults. An empty (or
/// whitespace-only) file yields the pure defaults. Unknown keys and
/// out-of-range values raise ConfigError.
ScenarioConfig load_config(const std::string& path, Scale scale = Scale::Paper);

/// Same, but from an in-memory string (used by tests and stdin configs).
ScenarioConfig parse_config(const std::string& text, Scale scale = Scale::Paper);

} // namespace masr
