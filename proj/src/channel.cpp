#include "masr/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace masr {

namespace {
constexpr std::complex<double> kImag{0.0, 1.0};
constexpr double kHalfPi = std::numbers::pi / 2.0;
} // namespace

double transmit_path_difference(AntennaPosition p, PathAngles a) noexcept {
    return p.x * std::sin(a.elevation) * std::cos(a.azimuth) +
           p.y * std::cos(a.elevation);
}

double receive_path_difference(AntennaPosition p, PathAngles a) noexcept {
    return transmit_path_difference(p, a);
}

Eigen::VectorXcd field_response_vector(AntennaPosition p,
                                       std::span<const PathAngles> angles,
                                       double wavelength) {
    if (wavelength <= 0.0)
        throw std::invalid_argument("field_response_vector: wavelength must be positive");
    if (angles.empty())
        throw std::invalid_argument("field_response_vector: empty angle list");

    const double k = 2.0 * std::numbers::pi / wavelength;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(angles.size()));
    for (std::size_t m = 0; m < angles.size(); ++m)
        v[static_cast<Eigen::Index>(m)] =
            std::exp(kImag * (k * transmit_path_difference(p, angles[m])));
    return v;
}

Eigen::VectorXcd synthesize_pt_channel(std::span<const AntennaPosition> positions,
                                       const LinkRealization& link,
                                       AntennaPosition receive_pos) {
    const auto paths = link.path_count();
    if (link.receive_angles.size() != paths ||
        static_cast<std::size_t>(link.path_responses.size()) != paths)
        throw std::invalid_argument("synthesize_pt_channel: link path lists disagree in length");
    if (positions.empty())
        throw std::invalid_argument("synthesize_pt_channel: no antenna positions");

    const Eigen::VectorXcd f =
        field_response_vector(receive_pos, link.receive_angles, link.wavelength);
    // Per-path weight conj(f_m) * sigma_m, shared by all antennas.
    const Eigen::VectorXcd weights = f.conjugate().cwiseProduct(link.path_responses);

    Eigen::VectorXcd h(static_cast<Eigen::Index>(positions.size()));
    for (std::size_t k = 0; k < positions.size(); ++k) {
        const Eigen::VectorXcd g =
            field_response_vector(positions[k], link.transmit_angles, link.wavelength);
        // dot() conjugates its first argument, so this is
        // conj(sum_m weights_m * g_m): the h^H w convention.
        h[static_cast<Eigen::Index>(k)] = weights.dot(g.conjugate());
    }
    return h;
}

std::complex<double> synthesize_bd_pu_channel(const LinkRealization& link,
                                              AntennaPosition bd_pos,
                                              AntennaPosition pu_pos) {
    const auto paths = link.path_count();
    if (link.receive_angles.size() != paths ||
        static_cast<std::size_t>(link.path_responses.size()) != paths)
        throw std::invalid_argument("synthesize_bd_pu_channel: link path lists disagree in length");

    const Eigen::VectorXcd f =
        field_response_vector(pu_pos, link.receive_angles, link.wavelength);
    const Eigen::VectorXcd g =
        field_response_vector(bd_pos, link.transmit_angles, link.wavelength);

    std::complex<double> h{0.0, 0.0};
    for (Eigen::Index m = 0; m < static_cast<Eigen::Index>(paths); ++m)
        h += std::conj(f[m]) * link.path_responses[m] * g[m];
    return h;
}

namespace {

LinkRealization draw_link(int paths, double wavelength, double per_path_variance,
                          Rng& rng) {
    LinkRealization link;
    link.wavelength = wavelength;
    link.transmit_angles.resize(static_cast<std::size_t>(paths));
    link.receive_angles.resize(static_cast<std::size_t>(paths));
    link.path_responses.resize(paths);

    for (auto& a : link.transmit_angles) {
        a.azimuth = rng.uniform(-kHalfPi, kHalfPi);
        a.elevation = rng.uniform(-kHalfPi, kHalfPi);
    }
    for (auto& a : link.receive_angles) {
        a.azimuth = rng.uniform(-kHalfPi, kHalfPi);
        a.elevation = rng.uniform(-kHalfPi, kHalfPi);
    }
    for (Eigen::Index m = 0; m < paths; ++m)
        link.path_responses[m] = rng.complex_normal(per_path_variance);
    return link;
}

} // namespace

ScenarioRealization draw_scenario(const ScenarioConfig& config, Rng& rng) {
    ScenarioRealization sc;
    sc.pu_topology_x = rng.uniform(topology::pu_min_x, topology::pu_max_x);

    const double ups = config.path_loss_linear;
    const double nu = config.path_loss_exponent;
    const int paths = config.path_count;
    const auto per_path = [&](double d) {
        return ups * std::pow(d, -nu) / static_cast<double>(paths);
    };

    sc.link_pt_bd = draw_link(paths, config.wavelength,
                              per_path(topology::pt_bd_distance()), rng);
    sc.link_pt_pu = draw_link(paths, config.wavelength,
                              per_path(topology::pt_pu_distance(sc.pu_topology_x)), rng);
    sc.link_bd_pu = draw_link(paths, config.wavelength,
                              per_path(topology::bd_pu_distance(sc.pu_topology_x)), rng);

    sc.h_s = synthesize_bd_pu_channel(sc.link_bd_pu, sc.bd_position, sc.pu_position);
    return sc;
}

} // namespace masr
