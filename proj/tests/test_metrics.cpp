#include <doctest.h>

#include "masr/metrics.hpp"
#include "oracles.hpp"

using namespace masr;

namespace {

LinkBudget random_budget(int antennas, Rng& rng, double alpha = 0.8) {
    LinkBudget lb;
    lb.h_u.resize(antennas);
    lb.h_b.resize(antennas);
    for (int i = 0; i < antennas; ++i) {
        lb.h_u[i] = rng.complex_normal(1.0);
        lb.h_b[i] = rng.complex_normal(1.0);
    }
    lb.h_s = rng.complex_normal(1.0);
    lb.alpha = alpha;
    lb.noise_power = 1e-2;
    return lb;
}

Eigen::VectorXcd random_beam(int antennas, Rng& rng) {
    Eigen::VectorXcd w(antennas);
    for (int i = 0; i < antennas; ++i)
        w[i] = rng.complex_normal(1.0);
    return w;
}

} // namespace

TEST_CASE("zero beam gives zero SINR and SNR") {
    Rng rng(1);
    const auto lb = random_budget(3, rng);
    const Eigen::VectorXcd w = Eigen::VectorXcd::Zero(3);
    CHECK(primary_sinr(lb, w) == 0.0);
    CHECK(secondary_snr(lb, w) == 0.0);
}

TEST_CASE("interference-free symmetric case") {
    LinkBudget lb;
    lb.h_u = Eigen::VectorXcd::Ones(1);
    lb.h_b = Eigen::VectorXcd::Ones(1);
    lb.h_s = 1.0;
    lb.alpha = 0.0;
    lb.noise_power = 4.0;
    Eigen::VectorXcd w(1);
    w[0] = 2.0; // |h_u^H w|^2 = 4 = noise
    CHECK(primary_sinr(lb, w) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(secondary_snr(lb, w) == 0.0);
}

TEST_CASE("metrics match the term-by-term evaluator") {
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        const auto lb = random_budget(1 + rng.uniform_index(5), rng, rng.uniform());
        const auto w = random_beam(lb.h_u.size(), rng);
        CHECK(primary_sinr(lb, w) ==
              doctest::Approx(oracles::sinr_direct(lb, w)).epsilon(1e-12));
        CHECK(secondary_snr(lb, w) ==
              doctest::Approx(oracles::snr_direct(lb, w)).epsilon(1e-12));
    }
}

TEST_CASE("scaling the beam up never lowers the SINR") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto lb = random_budget(3, rng, rng.uniform());
        const auto w = random_beam(3, rng);
        const double c = 1.0 + 3.0 * rng.uniform();
        CHECK(primary_sinr(lb, c * w) >= primary_sinr(lb, w) * (1.0 - 1e-12));
    }
}

TEST_CASE("rate anchor points") {
    CHECK(primary_rate(0.0) == 0.0);
    CHECK(primary_rate(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(primary_rate(3.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(primary_rate(-1e-9), std::domain_error);
}

TEST_CASE("BER anchor points") {
    CHECK(secondary_ber(0.0) == doctest::Approx(0.5));
    CHECK(secondary_ber(3.0) == doctest::Approx(0.0669872981077807).epsilon(1e-12));
    CHECK(secondary_ber(1.0) == doctest::Approx(0.1464466094067263).epsilon(1e-12));
    CHECK_THROWS_AS(secondary_ber(-0.1), std::domain_error);
}

TEST_CASE("BER is strictly decreasing") {
    Rng rng(4);
    for (int i = 0; i < 500; ++i) {
        const double g1 = rng.uniform(0.0, 50.0);
        const double g2 = g1 + rng.uniform(1e-6, 10.0);
        CHECK(secondary_ber(g1) > secondary_ber(g2));
    }
}

TEST_CASE("SNR floor anchor values") {
    CHECK(min_snr_for_ber(0.1) == doctest::Approx(16.0 / 9.0).epsilon(1e-9));
    CHECK(min_snr_for_ber(0.1464466094067263) == doctest::Approx(1.0).epsilon(1e-8));
    // cap close to one half: floor goes to zero
    CHECK(min_snr_for_ber(0.4999) < 2e-4);
    CHECK_THROWS_AS(min_snr_for_ber(0.0), std::domain_error);
    CHECK_THROWS_AS(min_snr_for_ber(0.5), std::domain_error);
    CHECK_THROWS_AS(min_snr_for_ber(-0.2), std::domain_error);
    CHECK_THROWS_AS(min_snr_for_ber(0.7), std::domain_error);
}

TEST_CASE("bisection agrees with the closed form") {
    for (const double cap : {0.01, 0.05, 0.1, 0.2, 0.3, 0.4}) {
        const double closed = oracles::min_snr_closed_form(cap);
        CHECK(min_snr_for_ber(cap) == doctest::Approx(closed).epsilon(1e-8));
    }
}

TEST_CASE("floor inversion followed by the BER curve is the identity") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const double cap = rng.uniform(0.005, 0.495);
        CHECK(secondary_ber(min_snr_for_ber(cap)) == doctest::Approx(cap).epsilon(1e-8));
    }
}

TEST_CASE("bisection meets its absolute tolerance") {
    for (const double cap : {0.02, 0.17, 0.33, 0.48}) {
        const double g = min_snr_for_ber(cap);
        CHECK(std::abs(secondary_ber(g) - cap) <= 1e-10);
    }
}
