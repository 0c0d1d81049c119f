#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "masr/channel.hpp"
#include "masr/config.hpp"
#include "masr/rng.hpp"

namespace masr {

/// Annealed particle-swarm parameters for the antenna-position search.
struct SaPsoParams {
    int swarm_size = 150;
    int max_iterations = 150;
    double inertia = 1.2;
    double cognitive_factor = 1.4;
    double social_factor = 1.4;
    double penalty = 50.0;            // bits subtracted per constraint hit
    double initial_temperature = 1.0; // bits
    double min_spacing = 0.05;        // m
    PlacementRegion region;
    bool sa_enabled = true; // false: plain PSO global-best rule
};

/// Number of unordered antenna pairs closer than min_spacing.
int violation_count(std::span<const AntennaPosition> positions, double min_spacing);

/// Fixed context for fitness evaluations: the beamformer frozen by the last
/// beamforming step plus the scenario every candidate layout is scored in.
struct FitnessContext {
    Eigen::VectorXcd w;
    const ScenarioRealization* scenario = nullptr;
    double alpha = 0.8;
    double noise_power = 1e-8;
    double ber_cap = 0.1;
};

struct FitnessValue {
    double value = 0.0; // penalized fitness, bits
    double rate = 0.0;  // primary rate at the candidate, bits
    int violations = 0; // spacing-pair violations
    bool ber_violated = false;

    bool feasible() const { return violations == 0 && !ber_violated; }
};

/// Penalized fitness: primary rate with channels re-synthesized at the
/// candidate layout, minus penalty per spacing violation and penalty once
/// more if the backscatter BER cap is broken. Candidates are never
/// rejected, only penalized.
FitnessValue evaluate_fitness(std::span<const AntennaPosition> positions,
                              const FitnessContext& ctx, const SaPsoParams& params);

/// Velocity update v <- w v + c1 r2 (pbest - p) + c2 r3 (pbest_global - p)
/// with each component clamped to +-(region span on its axis). Positions
/// are flattened as [x0, y0, x1, y1, ...].
void update_velocity(Eigen::VectorXd& velocity, const Eigen::VectorXd& position,
                     const Eigen::VectorXd& personal_best,
                     const Eigen::VectorXd& global_best, const SaPsoParams& params,
                     double r2, double r3);

/// p <- p + v, then per-coordinate clamp into the region.
void update_position(Eigen::VectorXd& position, const Eigen::VectorXd& velocity,
                     const PlacementRegion& region);

/// Metropolis gate: a candidate at least as fit as the incumbent is always
/// accepted; a worse one with probability exp((candidate - incumbent) / T).
/// Throws std::domain_error when temperature <= 0.
bool sa_accept(double candidate_fitness, double incumbent_fitness,
               double temperature, Rng& rng);

/// Cooling schedule T' = ((Q - q) / Q) T; reaches zero at q = Q. Callers
/// floor the result at 1e-12 before using it in the acceptance gate.
double anneal(double temperature, int iteration, int max_iterations);

struct SwarmResult {
    std::vector<AntennaPosition> best_position;
    double best_fitness = 0.0;
    double best_rate = 0.0;
    bool feasible = false; // false: best_position is the least-penalized candidate

    std::vector<double> global_best_trace; // SA-gated, may dip; Q+1 entries
    std::vector<double> incumbent_trace;   // best-so-far, non-decreasing; Q+1 entries
    std::vector<double> temperature_trace; // temperature used per iteration
    bool penalty_dominates = true; // penalty >= every rate seen (required of r1)
};

/// Full annealed-PSO search over the K antenna positions at a fixed
/// beamformer. Deterministic for a given rng state; the per-iteration draw
/// order is: r2, r3 per particle in index order, then the acceptance draw,
/// then the random global-best index when a worse candidate is accepted.
SwarmResult optimize_positions(const FitnessContext& ctx, const SaPsoParams& params,
                               Rng& rng);

} // namespace masr
