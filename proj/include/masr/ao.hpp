#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "masr/beamforming.hpp"
#include "masr/channel.hpp"
#include "masr/config.hpp"
#include "masr/rng.hpp"
#include "masr/swarm.hpp"

namespace masr {

/// Signed feasibility margins of a (beamformer, layout) pair; every margin
/// is nonnegative for a feasible solution.
struct ConstraintReport {
    double power_margin = 0.0;   // P_max - ||w||^2, W
    double ber_margin = 0.0;     // ber_cap - achieved BER
    double region_margin = 0.0;  // min distance of any coordinate to its bound, m
    double spacing_margin = 0.0; // min pairwise distance - d_min, m
    double rate = 0.0;           // primary rate, bits
};

/// Reported for a single-antenna layout, where no pair constraint exists.
inline constexpr double kNoSpacingConstraint = 1e30;

/// Margins and rate of an arbitrary candidate solution; reports, never throws.
ConstraintReport evaluate_solution(const Eigen::VectorXcd& w,
                                   std::span<const AntennaPosition> positions,
                                   const ScenarioRealization& scenario,
                                   const ScenarioConfig& config);

/// Deterministic start layout: K points of a centered square grid with
/// spacing max(min_spacing, side / ceil(sqrt(K))), which satisfies both the
/// region and the pairwise-distance constraints. Throws when K antennas
/// cannot be placed this way.
std::vector<AntennaPosition> initial_grid_positions(int antenna_count,
                                                    const PlacementRegion& region,
                                                    double min_spacing);

struct AoSolution {
    SolveStatus status = SolveStatus::NumericalFailure;
    Eigen::VectorXcd w;
    std::vector<AntennaPosition> positions;
    double rate = 0.0;
    ConstraintReport feasibility;

    std::vector<double> rate_trace; // incumbent rate per outer iteration
    int outer_iterations = 0;
    bool converged = false;
    std::vector<ScaTrace> sca_traces;
    std::vector<std::vector<double>> fitness_traces; // swarm incumbent per outer iter
    std::string message;
};

/// Alternate beamforming and position optimization until the incumbent rate
/// stabilizes (change <= config.convergence_tol) or the outer cap is hit.
/// The returned pair is the best feasible iterate seen, so the rate trace is
/// non-decreasing. extra_layouts are additional start layouts evaluated into
/// the incumbent before the loop (the harness seeds the fixed-array layout
/// so the movable result dominates that baseline by construction).
AoSolution alternate(const ScenarioRealization& scenario, const ScenarioConfig& config,
                     bool sa_enabled, Rng& rng,
                     std::span<const std::vector<AntennaPosition>> extra_layouts = {});

} // namespace masr
