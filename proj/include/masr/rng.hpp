#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace masr {

/// Deterministic random stream used everywhere in the simulator.
///
/// All distribution transforms are implemented here instead of relying on
/// <random> distribution objects, whose output is implementation-defined.
/// Identical seeds therefore produce identical draws on any platform.
/// Draw costs: uniform() consumes one engine word, standard_normal() and
/// complex_normal() consume two.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Uniform integer in [0, n). Lemire's multiply-shift; bias is
    /// negligible for the small n used here (swarm indices, path counts).
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    /// N(0, 1) via Box-Muller (cosine branch).
    double standard_normal() {
        const auto [r, theta] = polar_pair();
        return r * std::cos(theta);
    }

    /// Circularly-symmetric complex Gaussian CN(0, variance):
    /// real and imaginary parts are each N(0, variance/2).
    std::complex<double> complex_normal(double variance) {
        const auto [r, theta] = polar_pair();
        const double s = std::sqrt(0.5 * variance) * r;
        return {s * std::cos(theta), s * std::sin(theta)};
    }

private:
    struct Polar {
        double r, theta;
    };

    Polar polar_pair() {
        // u1 in (0, 1] so the log is finite.
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return {std::sqrt(-2.0 * std::log(u1)),
                2.0 * std::numbers::pi * u2};
    }

    std::mt19937_64 engine_;
};

/// Stable seed derivation for independent sub-streams (per trial, per
/// scheme). splitmix64 finalizer; never feeds related raw seeds to
/// adjacent mt19937_64 instances.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace masr
