// Independent reference implementations used only by tests. Everything here
// recomputes quantities from first principles (nested loops, closed forms,
// exhaustive grids) without touching the library's computation paths.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "masr/channel.hpp"
#include "masr/metrics.hpp"
#include "masr/swarm.hpp"

namespace oracles {

// Triple-sum channel synthesis: h_k = conj(sum_m conj(f_m) sigma_m g_m(p_k))
// with every phase term written out longhand.
inline Eigen::VectorXcd pt_channel(std::span<const masr::AntennaPosition> positions,
                                   const masr::LinkRealization& link,
                                   masr::AntennaPosition receive_pos) {
    const std::size_t paths = link.transmit_angles.size();
    const double wavenumber = 2.0 * std::numbers::pi / link.wavelength;
    Eigen::VectorXcd h(static_cast<Eigen::Index>(positions.size()));
    for (std::size_t k = 0; k < positions.size(); ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t m = 0; m < paths; ++m) {
            const auto& ta = link.transmit_angles[m];
            const auto& ra = link.receive_angles[m];
            const double rho_t = positions[k].x * std::sin(ta.elevation) * std::cos(ta.azimuth) +
                                 positions[k].y * std::cos(ta.elevation);
            const double rho_r = receive_pos.x * std::sin(ra.elevation) * std::cos(ra.azimuth) +
                                 receive_pos.y * std::cos(ra.elevation);
            const std::complex<double> g = std::polar(1.0, wavenumber * rho_t);
            const std::complex<double> f = std::polar(1.0, wavenumber * rho_r);
            acc += std::conj(f) * link.path_responses[static_cast<Eigen::Index>(m)] * g;
        }
        h[static_cast<Eigen::Index>(k)] = std::conj(acc);
    }
    return h;
}

inline std::complex<double> bd_pu_channel(const masr::LinkRealization& link,
                                          masr::AntennaPosition bd_pos,
                                          masr::AntennaPosition pu_pos) {
    const std::size_t paths = link.transmit_angles.size();
    const double wavenumber = 2.0 * std::numbers::pi / link.wavelength;
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t m = 0; m < paths; ++m) {
        const auto& ta = link.transmit_angles[m];
        const auto& ra = link.receive_angles[m];
        const double rho_t = bd_pos.x * std::sin(ta.elevation) * std::cos(ta.azimuth) +
                             bd_pos.y * std::cos(ta.elevation);
        const double rho_r = pu_pos.x * std::sin(ra.elevation) * std::cos(ra.azimuth) +
                             pu_pos.y * std::cos(ra.elevation);
        acc += std::conj(std::polar(1.0, wavenumber * rho_r)) *
               link.path_responses[static_cast<Eigen::Index>(m)] *
               std::polar(1.0, wavenumber * rho_t);
    }
    return acc;
}

// Closed-form inverse of the BPSK backscatter BER curve.
inline double min_snr_closed_form(double ber_cap) {
    const double s = 1.0 - 2.0 * ber_cap; // = sqrt(g / (1 + g))
    return s * s / (1.0 - s * s);
}

// Term-by-term link metrics.
inline double sinr_direct(const masr::LinkBudget& lb, const Eigen::VectorXcd& w) {
    std::complex<double> su{0, 0}, sb{0, 0};
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        su += std::conj(lb.h_u[i]) * w[i];
        sb += std::conj(lb.h_b[i]) * w[i];
    }
    const double num = std::norm(su);
    const double den = lb.alpha * std::norm(lb.h_s) * std::norm(sb) + lb.noise_power;
    return num / den;
}

inline double snr_direct(const masr::LinkBudget& lb, const Eigen::VectorXcd& w) {
    std::complex<double> sb{0, 0};
    for (Eigen::Index i = 0; i < w.size(); ++i)
        sb += std::conj(lb.h_b[i]) * w[i];
    return lb.alpha * std::norm(lb.h_s) * std::norm(sb) / lb.noise_power;
}

// Exhaustive rank-one beam search over span{h_u, h_b}: w = x u1 + y e^{j
// psi} u2 with x >= 0 and x^2 + y^2 <= max_power, restricted to the
// backscatter SNR floor. Returns the best true rate found (-1 if nothing
// feasible on the grid).
inline double span_grid_best_rate(const masr::LinkBudget& lb, double max_power,
                                  double min_snr, int points_per_axis = 200) {
    Eigen::VectorXcd u1;
    if (lb.h_u.norm() > 0.0)
        u1 = lb.h_u.normalized();
    else if (lb.h_b.norm() > 0.0)
        u1 = lb.h_b.normalized();
    else
        return 0.0;
    Eigen::VectorXcd residual = lb.h_b - u1 * u1.dot(lb.h_b);
    const bool two_dim = residual.norm() > 1e-12 * std::max(1e-300, lb.h_b.norm());
    Eigen::VectorXcd u2;
    if (two_dim)
        u2 = residual.normalized();

    const std::complex<double> hu1 = lb.h_u.dot(u1);
    const std::complex<double> hb1 = lb.h_b.dot(u1);
    const std::complex<double> hu2 = two_dim ? std::complex<double>(lb.h_u.dot(u2))
                                             : std::complex<double>(0.0);
    const std::complex<double> hb2 = two_dim ? std::complex<double>(lb.h_b.dot(u2))
                                             : std::complex<double>(0.0);
    const double beta = lb.alpha * std::norm(lb.h_s);
    const double radius = std::sqrt(max_power);

    double best = -1.0;
    for (int ia = 0; ia <= points_per_axis; ++ia) {
        const double x = radius * ia / points_per_axis;
        for (int ib = 0; ib <= points_per_axis; ++ib) {
            const double y = radius * ib / points_per_axis;
            if (x * x + y * y > max_power)
                break;
            for (int ip = 0; ip < points_per_axis; ++ip) {
                const double psi = 2.0 * std::numbers::pi * ip / points_per_axis;
                const std::complex<double> ph = std::polar(1.0, psi);
                const double signal = std::norm(std::conj(hu1) * x + std::conj(hu2) * ph * y);
                const double feed = std::norm(std::conj(hb1) * x + std::conj(hb2) * ph * y);
                if (beta * feed < min_snr * lb.noise_power)
                    continue;
                const double rate =
                    std::log2(1.0 + signal / (beta * feed + lb.noise_power));
                best = std::max(best, rate);
                if (!two_dim)
                    break; // psi is irrelevant without a second basis vector
            }
            if (!two_dim && ib == 0)
                break; // y only enters through u2
        }
    }
    return best;
}

// Exhaustive antenna-position search on a uniform grid, scoring the same
// penalized fitness the swarm uses.
inline double position_grid_best_fitness(const masr::FitnessContext& ctx,
                                         const masr::SaPsoParams& params,
                                         int points_per_coordinate = 21) {
    const int g = points_per_coordinate;
    const auto& reg = params.region;
    std::vector<masr::AntennaPosition> pos(2);
    double best = -1e300;
    for (int i0 = 0; i0 < g; ++i0)
        for (int j0 = 0; j0 < g; ++j0)
            for (int i1 = 0; i1 < g; ++i1)
                for (int j1 = 0; j1 < g; ++j1) {
                    pos[0] = {reg.x_min + reg.width() * i0 / (g - 1),
                              reg.y_min + reg.height() * j0 / (g - 1)};
                    pos[1] = {reg.x_min + reg.width() * i1 / (g - 1),
                              reg.y_min + reg.height() * j1 / (g - 1)};
                    best = std::max(best, evaluate_fitness(pos, ctx, params).value);
                }
    return best;
}

} // namespace oracles
