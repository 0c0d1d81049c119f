#pragma once

#include <string>

#include <Eigen/Dense>

namespace masr {

/// One convex beamforming subproblem: maximize the concave rate surrogate
/// over Hermitian PSD W subject to trace(W) <= max_power and
/// trace(interference_outer * W) >= min_backscatter_power.
///
/// signal_outer is h_u h_u^H; interference_outer is alpha |h_s|^2 h_b h_b^H;
/// expansion_point is the surrogate's linearization matrix (a feasible W).
struct SdpSubproblem {
    Eigen::MatrixXcd signal_outer;
    Eigen::MatrixXcd interference_outer;
    double noise_power = 0.0;
    double max_power = 0.0;
    double min_backscatter_power = 0.0; // required trace(B W), watts
    Eigen::MatrixXcd expansion_point;
};

enum class SolveStatus { Ok, Infeasible, NumericalFailure };

struct SdpSolution {
    SolveStatus status = SolveStatus::NumericalFailure;
    // Optimizer. The interior-point iterate is polished onto its principal
    // direction (the optimum is provably rank one), so this is typically an
    // exactly rank-one matrix.
    Eigen::MatrixXcd w_matrix;
    double surrogate_value = 0.0; // bits
    double kkt_residual = 0.0;    // duality-gap bound at termination, bits
    // lambda_2 / lambda_1 of the raw interior-point iterate, before the
    // rank-one polish; the numerical check of the rank-one property.
    double eigen_ratio = 0.0;
    int newton_steps = 0;
    std::string message;
};

/// Trace(M W) for Hermitian M, W; checks that the imaginary residue is
/// below 1e-10 (relative) and throws std::logic_error if not.
double real_trace_product(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& w);

/// True achievable rate log2(1 + Tr(AW) / (Tr(BW) + noise)) at W.
double matrix_rate(const Eigen::MatrixXcd& w, const SdpSubproblem& sp);

/// Concave lower bound on matrix_rate, tight at the expansion point:
/// log2(Tr(AW) + Tr(BW) + noise) - log2(Tr(B Wref) + noise)
///   - Tr(B (W - Wref)) / (ln2 (Tr(B Wref) + noise)).
/// Throws std::invalid_argument on a non-Hermitian W.
double surrogate_objective(const Eigen::MatrixXcd& w, const SdpSubproblem& sp);

/// Ratio of the two largest eigenvalues of a Hermitian PSD matrix; 0 for
/// exact rank one. Throws std::invalid_argument on a zero matrix.
double rank_one_gap(const Eigen::MatrixXcd& w);

/// True iff some PSD W with trace(W) <= max_power reaches the required
/// trace(B W); the maximum over that ball is max_power * lambda_max(B).
bool subproblem_feasible(const SdpSubproblem& sp);

/// Interior-point solve of the subproblem: primal log-barrier (log-det on
/// the PSD cone plus logs of the two trace gaps) with damped Newton steps.
/// tol is the target duality-gap bound in bits. The default is tight
/// because successive-approximation ascent checks downstream compare
/// optima of nearly identical subproblems.
SdpSolution solve_subproblem(const SdpSubproblem& sp, double tol = 1e-13);

} // namespace masr
