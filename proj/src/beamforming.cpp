#include "masr/beamforming.hpp"

#include <cmath>
#include <stdexcept>

namespace masr {

namespace {

constexpr int kMaxScaIterations = 50;
constexpr double kRankRepairThreshold = 1e-5;

Eigen::VectorXcd start_direction(const LinkBudget& lb) {
    if (lb.h_b.squaredNorm() > 0.0)
        return lb.h_b.normalized();
    if (lb.h_u.squaredNorm() > 0.0)
        return lb.h_u.normalized();
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(lb.h_u.size());
    e[0] = 1.0;
    return e;
}

} // namespace

std::optional<Eigen::MatrixXcd> initialize_w(const LinkBudget& lb, double max_power,
                                             double min_snr) {
    const double beta = lb.alpha * std::norm(lb.h_s);
    const double reachable = beta * max_power * lb.h_b.squaredNorm();
    if (reachable < min_snr * lb.noise_power)
        return std::nullopt;

    const Eigen::VectorXcd dir = start_direction(lb);
    return max_power * (dir * dir.adjoint());
}

Eigen::VectorXcd extract_beamformer(const Eigen::MatrixXcd& w_matrix) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w_matrix);
    const Eigen::Index n = w_matrix.rows();
    const double top = es.eigenvalues()[n - 1];
    if (top <= 0.0)
        throw std::invalid_argument("extract_beamformer: matrix has no positive eigenvalue");
    return std::sqrt(top) * es.eigenvectors().col(n - 1);
}

Eigen::VectorXcd normalize_global_phase(Eigen::VectorXcd w) {
    const double norm = w.norm();
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double mag = std::abs(w[i]);
        if (mag > 1e-12 * norm) {
            w *= std::conj(w[i]) / mag;
            w[i] = mag; // clear the rounding residue on the anchor entry
            return w;
        }
    }
    return w;
}

ScaResult sca_optimize(const LinkBudget& lb, double max_power, double min_snr,
                       double rate_tol) {
    ScaResult out;

    auto w0 = initialize_w(lb, max_power, min_snr);
    if (!w0) {
        out.status = ScaStatus::Infeasible;
        out.message = "backscatter SNR floor unreachable at these positions";
        return out;
    }

    SdpSubproblem sp;
    sp.signal_outer = lb.h_u * lb.h_u.adjoint();
    sp.interference_outer =
        lb.alpha * std::norm(lb.h_s) * (lb.h_b * lb.h_b.adjoint());
    sp.noise_power = lb.noise_power;
    sp.max_power = max_power;
    sp.min_backscatter_power = min_snr * lb.noise_power;
    sp.expansion_point = *w0;

    const double t_min = sp.min_backscatter_power;
    Eigen::MatrixXcd w_cur = *w0;

    for (int iter = 1; iter <= kMaxScaIterations; ++iter) {
        sp.expansion_point = w_cur;
        SdpSolution sol = solve_subproblem(sp);
        if (sol.status == SolveStatus::Infeasible) {
            out.status = ScaStatus::Infeasible;
            out.message = sol.message;
            return out;
        }
        if (sol.status == SolveStatus::NumericalFailure) {
            out.status = ScaStatus::NumericalFailure;
            out.message = "subproblem solve failed: " + sol.message;
            return out;
        }

        if (!out.trace.surrogate_values.empty() &&
            sol.surrogate_value < out.trace.surrogate_values.back() - 1e-9) {
            out.status = ScaStatus::NonMonotone;
            out.message = "surrogate decreased from " +
                          std::to_string(out.trace.surrogate_values.back()) +
                          " to " + std::to_string(sol.surrogate_value);
            return out;
        }
        out.trace.surrogate_values.push_back(sol.surrogate_value);
        out.trace.iterations = iter;

        w_cur = sol.w_matrix;
        if (sol.eigen_ratio > kRankRepairThreshold) {
            // The relaxation is rank-one at the optimum in theory; repair a
            // numerically spread solution and continue from the repaired point.
            ++out.trace.rank_repair_events;
            Eigen::VectorXcd w_vec = extract_beamformer(w_cur);
            if (t_min > 0.0) {
                const double got =
                    real_trace_product(sp.interference_outer, w_vec * w_vec.adjoint());
                if (got < t_min && got > 0.0) {
                    const double scale =
                        std::min(std::sqrt(t_min / got),
                                 std::sqrt(max_power / w_vec.squaredNorm()));
                    w_vec *= scale;
                }
            }
            w_cur = w_vec * w_vec.adjoint();
        }

        const auto& vals = out.trace.surrogate_values;
        if (vals.size() >= 2 &&
            std::abs(vals.back() - vals[vals.size() - 2]) <= rate_tol) {
            out.trace.converged = true;
            break;
        }
    }

    out.w = normalize_global_phase(extract_beamformer(w_cur));
    out.status = ScaStatus::Ok;
    return out;
}

} // namespace masr
