#include "masr/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "masr/metrics.hpp"

namespace masr {

namespace {

constexpr double kTemperatureFloor = 1e-12;

std::vector<AntennaPosition> unflatten(const Eigen::VectorXd& v) {
    std::vector<AntennaPosition> out(static_cast<std::size_t>(v.size() / 2));
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = {v[static_cast<Eigen::Index>(2 * k)],
                  v[static_cast<Eigen::Index>(2 * k + 1)]};
    return out;
}

} // namespace

int violation_count(std::span<const AntennaPosition> positions, double min_spacing) {
    int count = 0;
    for (std::size_t k = 0; k + 1 < positions.size(); ++k)
        for (std::size_t j = k + 1; j < positions.size(); ++j) {
            const double dx = positions[k].x - positions[j].x;
            const double dy = positions[k].y - positions[j].y;
            if (std::sqrt(dx * dx + dy * dy) < min_spacing)
                ++count;
        }
    return count;
}

FitnessValue evaluate_fitness(std::span<const AntennaPosition> positions,
                              const FitnessContext& ctx, const SaPsoParams& params) {
    const LinkBudget lb =
        make_link_budget(*ctx.scenario, positions, ctx.alpha, ctx.noise_power);

    FitnessValue fv;
    fv.rate = primary_rate(primary_sinr(lb, ctx.w));
    fv.violations = violation_count(positions, params.min_spacing);
    fv.ber_violated = secondary_ber(secondary_snr(lb, ctx.w)) > ctx.ber_cap;
    fv.value = fv.rate - params.penalty * fv.violations -
               (fv.ber_violated ? params.penalty : 0.0);
    return fv;
}

void update_velocity(Eigen::VectorXd& velocity, const Eigen::VectorXd& position,
                     const Eigen::VectorXd& personal_best,
                     const Eigen::VectorXd& global_best, const SaPsoParams& params,
                     double r2, double r3) {
    velocity = params.inertia * velocity +
               params.cognitive_factor * r2 * (personal_best - position) +
               params.social_factor * r3 * (global_best - position);
    // The inertia weight can exceed 1; cap each component at the region span
    // so the swarm stays bounded without losing full-region reachability.
    const double span_x = params.region.width();
    const double span_y = params.region.height();
    for (Eigen::Index i = 0; i < velocity.size(); ++i) {
        const double cap = (i % 2 == 0) ? span_x : span_y;
        velocity[i] = std::clamp(velocity[i], -cap, cap);
    }
}

void update_position(Eigen::VectorXd& position, const Eigen::VectorXd& velocity,
                     const PlacementRegion& region) {
    position += velocity;
    for (Eigen::Index i = 0; i < position.size(); i += 2) {
        position[i] = std::clamp(position[i], region.x_min, region.x_max);
        position[i + 1] = std::clamp(position[i + 1], region.y_min, region.y_max);
    }
}

bool sa_accept(double candidate_fitness, double incumbent_fitness,
               double temperature, Rng& rng) {
    if (temperature <= 0.0)
        throw std::domain_error("sa_accept: temperature must be positive");
    if (candidate_fitness >= incumbent_fitness)
        return true;
    const double prob =
        std::exp((candidate_fitness - incumbent_fitness) / temperature);
    return prob > rng.uniform();
}

double anneal(double temperature, int iteration, int max_iterations) {
    if (max_iterations < 1)
        throw std::invalid_argument("anneal: max_iterations must be >= 1");
    if (iteration < 0 || iteration > max_iterations)
        throw std::invalid_argument("anneal: iteration out of [0, max_iterations]");
    return (static_cast<double>(max_iterations - iteration) /
            static_cast<double>(max_iterations)) *
           temperature;
}

namespace {

struct ParticleState {
    Eigen::VectorXd position;
    Eigen::VectorXd velocity;
    Eigen::VectorXd best_position;
    double best_fitness = 0.0;
    FitnessValue current;
};

// Candidate ranking for the returned incumbent: fewer spacing violations
// first, then a satisfied BER cap, then the higher rate. This makes the
// search return a violation-free layout whenever one was ever evaluated.
bool incumbent_better(const FitnessValue& a, const FitnessValue& b) {
    if (a.violations != b.violations)
        return a.violations < b.violations;
    if (a.ber_violated != b.ber_violated)
        return !a.ber_violated;
    return a.rate > b.rate;
}

} // namespace

SwarmResult optimize_positions(const FitnessContext& ctx, const SaPsoParams& params,
                               Rng& rng) {
    if (ctx.scenario == nullptr)
        throw std::invalid_argument("optimize_positions: scenario is null");
    if (params.swarm_size < 1 || params.max_iterations < 1)
        throw std::invalid_argument("optimize_positions: swarm_size and max_iterations must be >= 1");

    const int swarm = params.swarm_size;
    const int iterations = params.max_iterations;
    const Eigen::Index dim = 2 * ctx.w.size();
    const PlacementRegion& region = params.region;

    SwarmResult result;
    double max_rate_seen = 0.0;

    FitnessValue incumbent_value;
    Eigen::VectorXd incumbent_position;
    bool have_incumbent = false;
    auto offer_incumbent = [&](const FitnessValue& fv, const Eigen::VectorXd& pos) {
        max_rate_seen = std::max(max_rate_seen, fv.rate);
        if (!have_incumbent || incumbent_better(fv, incumbent_value)) {
            incumbent_value = fv;
            incumbent_position = pos;
            have_incumbent = true;
        }
    };

    // Steps 1-3: random layouts, zero velocities, personal bests at the
    // start points, global best by fitness.
    std::vector<ParticleState> particles(static_cast<std::size_t>(swarm));
    for (auto& p : particles) {
        p.position.resize(dim);
        for (Eigen::Index i = 0; i < dim; i += 2) {
            p.position[i] = rng.uniform(region.x_min, region.x_max);
            p.position[i + 1] = rng.uniform(region.y_min, region.y_max);
        }
        p.velocity = Eigen::VectorXd::Zero(dim);
        p.current = evaluate_fitness(unflatten(p.position), ctx, params);
        p.best_position = p.position;
        p.best_fitness = p.current.value;
        offer_incumbent(p.current, p.position);
    }

    std::size_t global_idx = 0;
    for (std::size_t s = 1; s < particles.size(); ++s)
        if (particles[s].current.value > particles[global_idx].current.value)
            global_idx = s;
    Eigen::VectorXd global_position = particles[global_idx].position;
    double global_fitness = particles[global_idx].current.value;

    result.global_best_trace.push_back(global_fitness);
    result.incumbent_trace.push_back(incumbent_value.value);

    double temperature = params.initial_temperature;

    for (int q = 0; q < iterations; ++q) {
        // Steps 5-12: move every particle and refresh its personal best.
        for (auto& p : particles) {
            const double r2 = rng.uniform();
            const double r3 = rng.uniform();
            update_velocity(p.velocity, p.position, p.best_position,
                            global_position, params, r2, r3);
            update_position(p.position, p.velocity, region);
            p.current = evaluate_fitness(unflatten(p.position), ctx, params);
            offer_incumbent(p.current, p.position);
            if (p.current.value > p.best_fitness) {
                p.best_fitness = p.current.value;
                p.best_position = p.position;
            }
        }

        // Steps 13-23: fitness-sorted candidate selection with the
        // annealing gate on accepting a worse global best.
        std::vector<std::size_t> order(particles.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return particles[a].current.value > particles[b].current.value;
        });

        const ParticleState& top = particles[order[0]];
        const double used_temperature = std::max(temperature, kTemperatureFloor);
        result.temperature_trace.push_back(used_temperature);

        if (top.current.value >= global_fitness) {
            global_position = top.position;
            global_fitness = top.current.value;
        } else if (params.sa_enabled &&
                   sa_accept(top.current.value, global_fitness, used_temperature,
                             rng)) {
            const std::size_t pick = static_cast<std::size_t>(
                rng.uniform_index(static_cast<std::uint64_t>(swarm)));
            global_position = particles[order[pick]].position;
            global_fitness = particles[order[pick]].current.value;
        }

        result.global_best_trace.push_back(global_fitness);
        result.incumbent_trace.push_back(incumbent_value.value);
        temperature = anneal(temperature, q + 1, iterations);
    }

    result.best_position = unflatten(incumbent_position);
    result.best_fitness = incumbent_value.value;
    result.best_rate = incumbent_value.rate;
    result.feasible = incumbent_value.feasible();
    result.penalty_dominates = max_rate_seen <= params.penalty;
    return result;
}

} // namespace masr
