#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "masr/channel.hpp"

namespace masr {

/// Everything the link metrics need: both transmitter channels, the
/// backscatter channel, the reflection efficiency and the noise power.
struct LinkBudget {
    Eigen::VectorXcd h_u; // transmitter -> primary user
    Eigen::VectorXcd h_b; // transmitter -> backscatter device
    std::complex<double> h_s{0.0, 0.0};
    double alpha = 0.8;       // reflection efficiency, [0, 1]
    double noise_power = 1e-8; // W
};

struct Beamformer {
    Eigen::VectorXcd w;
    double power() const { return w.squaredNorm(); }
};

/// Budget at a candidate antenna layout: channels re-synthesized from the
/// scenario's drawn geometry at the given positions.
LinkBudget make_link_budget(const ScenarioRealization& scenario,
                            std::span<const AntennaPosition> positions,
                            double alpha, double noise_power);

/// Primary-link SINR: |h_u^H w|^2 / (alpha |h_s|^2 |h_b^H w|^2 + noise).
/// The backscattered term is treated as interference.
double primary_sinr(const LinkBudget& lb, const Eigen::VectorXcd& w);

/// log2(1 + sinr). Throws std::domain_error on negative input.
double primary_rate(double sinr);

/// Backscatter-link SNR after the primary signal is removed:
/// alpha |h_s|^2 |h_b^H w|^2 / noise.
double secondary_snr(const LinkBudget& lb, const Eigen::VectorXcd& w);

/// Average BPSK backscatter BER: 1/2 - 1/2 sqrt(snr / (1 + snr)).
/// Strictly decreasing from 0.5 at snr = 0. Throws on negative snr.
double secondary_ber(double snr);

/// Smallest SNR whose BER does not exceed ber_cap, found by bisection
/// (|secondary_ber(result) - ber_cap| <= 1e-10). ber_cap must lie in
/// (0, 0.5); throws std::domain_error otherwise.
double min_snr_for_ber(double ber_cap);

} // namespace masr
