#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "masr/config.hpp"
#include "masr/rng.hpp"

namespace masr {

struct AntennaPosition {
    double x = 0.0; // meters, local to the node's placement region
    double y = 0.0;
};

struct PathAngles {
    double azimuth = 0.0;   // radians
    double elevation = 0.0; // radians
};

/// One drawn multipath link: per-path departure/arrival angles and complex
/// path responses (the diagonal of the path-response matrix).
struct LinkRealization {
    std::vector<PathAngles> transmit_angles;
    std::vector<PathAngles> receive_angles;
    Eigen::VectorXcd path_responses;
    double wavelength = 0.1;

    std::size_t path_count() const { return transmit_angles.size(); }
};

/// One random scenario draw. Antenna-position coordinates are local to each
/// node; large-scale path loss is baked into the path responses via the
/// topology-level distances.
struct ScenarioRealization {
    LinkRealization link_pt_bd; // transmitter -> backscatter device
    LinkRealization link_pt_pu; // transmitter -> primary user
    LinkRealization link_bd_pu; // backscatter device -> primary user

    AntennaPosition bd_position{0.0, 0.0}; // fixed receive antennas sit at
    AntennaPosition pu_position{0.0, 0.0}; // their local origins

    double pu_topology_x = 0.0;         // drawn PU ground distance, m
    std::complex<double> h_s{0.0, 0.0}; // BD->PU channel, fixed per draw
};

// Fixed experiment topology (meters): transmitter site at the origin, the
// backscatter device at (30, 40), the primary user at (x, 0) with x drawn
// uniformly from [pu_min_x, pu_max_x].
namespace topology {
inline constexpr double bd_site_x = 30.0;
inline constexpr double bd_site_y = 40.0;
inline constexpr double pu_min_x = 30.0;
inline constexpr double pu_max_x = 60.0;

inline double pt_bd_distance() { return 50.0; }
inline double pt_pu_distance(double pu_x) { return pu_x; }
inline double bd_pu_distance(double pu_x) {
    const double dx = bd_site_x - pu_x;
    return std::sqrt(dx * dx + bd_site_y * bd_site_y);
}
} // namespace topology

/// Propagation-length difference between a path leaving an antenna at p and
/// the same path leaving the region origin: x sin(el) cos(az) + y cos(el).
double transmit_path_difference(AntennaPosition p, PathAngles a) noexcept;

/// Identical form on the receive side.
double receive_path_difference(AntennaPosition p, PathAngles a) noexcept;

/// Unit-modulus phase vector exp(j 2pi/lambda * path_difference) over the
/// given paths. Throws std::invalid_argument on lambda <= 0 or no angles.
Eigen::VectorXcd field_response_vector(AntennaPosition p,
                                       std::span<const PathAngles> angles,
                                       double wavelength);

/// Channel from the K-antenna transmitter to a fixed single-antenna node.
///
/// Convention: the returned h is defined so the received scalar is h^H w.
/// Entry k is conj(sum_m conj(f_m) sigma_m g_m(p_k)) with f the receive
/// field response at receive_pos and g the transmit field response at
/// positions[k]. Throws std::invalid_argument on length mismatches.
Eigen::VectorXcd synthesize_pt_channel(std::span<const AntennaPosition> positions,
                                       const LinkRealization& link,
                                       AntennaPosition receive_pos);

/// Scalar channel between the two fixed nodes (triple product of receive
/// response, path responses, transmit response).
std::complex<double> synthesize_bd_pu_channel(const LinkRealization& link,
                                              AntennaPosition bd_pos,
                                              AntennaPosition pu_pos);

/// Draw a full scenario: PU placement, per-link angles uniform on
/// [-pi/2, pi/2], complex Gaussian path responses with per-path variance
/// upsilon * d^-nu / L. Deterministic given the rng state; the draw order
/// is part of the reproducibility contract (pu_x, then per link in the
/// order pt_bd, pt_pu, bd_pu: transmit angles, receive angles, responses).
ScenarioRealization draw_scenario(const ScenarioConfig& config, Rng& rng);

} // namespace masr
