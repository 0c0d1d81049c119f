#include "masr/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace masr {

LinkBudget make_link_budget(const ScenarioRealization& scenario,
                            std::span<const AntennaPosition> positions,
                            double alpha, double noise_power) {
    LinkBudget lb;
    lb.h_u = synthesize_pt_channel(positions, scenario.link_pt_pu, scenario.pu_position);
    lb.h_b = synthesize_pt_channel(positions, scenario.link_pt_bd, scenario.bd_position);
    lb.h_s = scenario.h_s;
    lb.alpha = alpha;
    lb.noise_power = noise_power;
    return lb;
}

double primary_sinr(const LinkBudget& lb, const Eigen::VectorXcd& w) {
    if (lb.h_u.size() != w.size() || lb.h_b.size() != w.size())
        throw std::invalid_argument("primary_sinr: vector lengths disagree");
    const double signal = std::norm(lb.h_u.dot(w));
    const double interference =
        lb.alpha * std::norm(lb.h_s) * std::norm(lb.h_b.dot(w));
    return signal / (interference + lb.noise_power);
}

double primary_rate(double sinr) {
    if (sinr < 0.0)
        throw std::domain_error("primary_rate: negative SINR");
    return std::log2(1.0 + sinr);
}

double secondary_snr(const LinkBudget& lb, const Eigen::VectorXcd& w) {
    if (lb.h_b.size() != w.size())
        throw std::invalid_argument("secondary_snr: vector lengths disagree");
    return lb.alpha * std::norm(lb.h_s) * std::norm(lb.h_b.dot(w)) / lb.noise_power;
}

double secondary_ber(double snr) {
    if (snr < 0.0)
        throw std::domain_error("secondary_ber: negative SNR");
    return 0.5 - 0.5 * std::sqrt(snr / (1.0 + snr));
}

double min_snr_for_ber(double ber_cap) {
    if (!(ber_cap > 0.0 && ber_cap < 0.5))
        throw std::domain_error("min_snr_for_ber: ber_cap must lie in (0, 0.5)");

    // secondary_ber is strictly decreasing, so bracket then bisect.
    double lo = 0.0;        // ber = 0.5 >= ber_cap
    double hi = 1.0;
    while (secondary_ber(hi) > ber_cap)
        hi *= 2.0;

    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double e = secondary_ber(mid);
        if (std::abs(e - ber_cap) <= 1e-12)
            return mid;
        if (e > ber_cap)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace masr
