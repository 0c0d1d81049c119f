#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "masr/metrics.hpp"
#include "masr/sdp.hpp"

namespace masr {

/// Convergence record of one successive-convex-approximation run.
struct ScaTrace {
    std::vector<double> surrogate_values; // optimum of each convex subproblem
    int iterations = 0;
    bool converged = false;
    int rank_repair_events = 0;
};

enum class ScaStatus { Ok, Infeasible, NumericalFailure, NonMonotone };

struct ScaResult {
    ScaStatus status = ScaStatus::NumericalFailure;
    Eigen::VectorXcd w; // phase-normalized beamformer
    ScaTrace trace;
    std::string message;
};

/// Starting matrix for the SCA: full power on the normalized backscatter
/// channel. That choice maximizes the reachable backscatter power, so when
/// it violates the SNR floor no beamformer at these positions can satisfy
/// it and nullopt is returned.
std::optional<Eigen::MatrixXcd> initialize_w(const LinkBudget& lb, double max_power,
                                             double min_snr);

/// Principal-eigenpair beamformer of a Hermitian PSD matrix: sqrt(l1) v1.
/// Throws std::invalid_argument when the matrix has no positive eigenvalue.
Eigen::VectorXcd extract_beamformer(const Eigen::MatrixXcd& w_matrix);

/// Rotate a beamformer so its first non-negligible entry is real and
/// nonnegative (fixes the physically meaningless global phase so output
/// files are reproducible).
Eigen::VectorXcd normalize_global_phase(Eigen::VectorXcd w);

/// Maximize the primary rate over the beamformer at fixed antenna
/// positions: iterate the convex surrogate subproblem until the optimum
/// changes by at most rate_tol bits (cap 50 iterations), then extract the
/// rank-one beamformer. min_snr is the backscatter SNR floor equivalent to
/// the BER cap; pass 0 to disable it.
ScaResult sca_optimize(const LinkBudget& lb, double max_power, double min_snr,
                       double rate_tol);

} // namespace masr
