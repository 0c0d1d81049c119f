#include "masr/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace masr {

namespace {

constexpr double kLn2 = 0.6931471805599453;

bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <=
           tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

} // namespace

double real_trace_product(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& w) {
    // Tr(MW) = sum_ij M_ij W_ji = sum_ij M_ij conj(W_ij) for Hermitian W.
    const std::complex<double> t = m.cwiseProduct(w.conjugate()).sum();
    const double scale = std::max(1.0, std::abs(t.real()));
    if (std::abs(t.imag()) > 1e-10 * scale)
        throw std::logic_error("real_trace_product: imaginary residue above tolerance");
    return t.real();
}

double matrix_rate(const Eigen::MatrixXcd& w, const SdpSubproblem& sp) {
    const double sig = real_trace_product(sp.signal_outer, w);
    const double intf = real_trace_product(sp.interference_outer, w);
    return std::log2(1.0 + sig / (intf + sp.noise_power));
}

double surrogate_objective(const Eigen::MatrixXcd& w, const SdpSubproblem& sp) {
    if (!is_hermitian(w, 1e-9))
        throw std::invalid_argument("surrogate_objective: W is not Hermitian");

    const double sig = real_trace_product(sp.signal_outer, w);
    const double intf = real_trace_product(sp.interference_outer, w);
    const double intf_ref =
        real_trace_product(sp.interference_outer, sp.expansion_point);
    const double denom_ref = intf_ref + sp.noise_power;

    return std::log2(sig + intf + sp.noise_power) - std::log2(denom_ref) -
           (intf - intf_ref) / (kLn2 * denom_ref);
}

double rank_one_gap(const Eigen::MatrixXcd& w) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues(); // ascending
    const Eigen::Index n = ev.size();
    const double top = ev[n - 1];
    if (top <= 0.0)
        throw std::invalid_argument("rank_one_gap: matrix has no positive eigenvalue");
    if (n == 1)
        return 0.0;
    return std::max(0.0, ev[n - 2]) / top;
}

bool subproblem_feasible(const SdpSubproblem& sp) {
    if (sp.min_backscatter_power <= 0.0)
        return true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sp.interference_outer,
                                                       Eigen::EigenvaluesOnly);
    const double reach = sp.max_power * std::max(0.0, es.eigenvalues().maxCoeff());
    return reach >= sp.min_backscatter_power;
}

namespace {

// Everything the barrier needs about one iterate.
struct IterateState {
    double numer = 0.0;     // Tr((A+B)W) + noise
    double trace_b = 0.0;   // Tr(BW)
    double power_gap = 0.0; // max_power - Tr(W)
    double floor_gap = 1.0; // Tr(BW) - t_min (1 when the floor is off)
    double logdet = 0.0;
    bool interior = false;
};

// Exact rank-one optimum over span{h_u, h_b} for rank-one quadratic forms,
// in noise-normalized units. Reduces to a scalar search over the
// backscatter feed q = Tr(BW)/lambda_max(B) with the rest of the power on
// the orthogonalized signal direction, phases aligned. Returns an empty
// matrix when the reduction does not apply (inputs not rank one, or the
// floor is unreachable along the span).
Eigen::MatrixXcd detail_span_polish(const Eigen::MatrixXcd& a,
                                    const Eigen::MatrixXcd& b, double t_min,
                                    bool has_floor, double p_tot,
                                    double denom_ref,
                                    const Eigen::MatrixXcd& seed_w) {
    const Eigen::Index n = a.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esa(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esb(b);
    const auto& eva = esa.eigenvalues(); // ascending
    const auto& evb = esb.eigenvalues();
    const double la = std::max(0.0, eva[n - 1]);
    const double lb = std::max(0.0, evb[n - 1]);
    if (n > 1 && ((la > 0.0 && std::max(0.0, eva[n - 2]) > 1e-10 * la) ||
                  (lb > 0.0 && std::max(0.0, evb[n - 2]) > 1e-10 * lb)))
        return {};
    if (la <= 0.0 && lb <= 0.0)
        return {};

    if (lb <= 0.0 || !std::isfinite(denom_ref)) {
        // No backscatter coupling: full power on the signal direction.
        const Eigen::VectorXcd u = esa.eigenvectors().col(n - 1);
        return p_tot * (u * u.adjoint());
    }

    const Eigen::VectorXcd e1 = esb.eigenvectors().col(n - 1);
    const double b1 = lb;
    const Eigen::VectorXcd hu =
        la > 0.0 ? Eigen::VectorXcd(std::sqrt(la) * esa.eigenvectors().col(n - 1))
                 : Eigen::VectorXcd(Eigen::VectorXcd::Zero(n));
    const std::complex<double> c = e1.dot(hu); // e1^H h_u
    const double a1 = std::abs(c);
    const Eigen::VectorXcd resid = hu - c * e1;
    const double a2 = resid.norm();
    const bool has_e2 = a2 > 1e-14 * std::max(1.0, hu.norm());

    double q_lo = has_floor ? t_min / b1 : 0.0;
    if (q_lo > p_tot * (1.0 + 1e-12))
        return {};
    q_lo = std::min(q_lo, p_tot);

    const double lin = 1.0 / (kLn2 * denom_ref);
    const auto value = [&](double q) {
        q = std::clamp(q, q_lo, p_tot);
        const double rest = std::max(0.0, p_tot - q);
        const double amp = has_e2 ? a1 * std::sqrt(q) + a2 * std::sqrt(rest)
                                  : a1 * std::sqrt(q);
        return std::log2(amp * amp + b1 * q + 1.0) - lin * b1 * q;
    };

    constexpr int kGrid = 512;
    double best_q = q_lo;
    double best_v = value(q_lo);
    const auto consider = [&](double q) {
        q = std::clamp(q, q_lo, p_tot);
        const double v = value(q);
        if (v > best_v) {
            best_v = v;
            best_q = q;
        }
    };
    for (int i = 1; i <= kGrid; ++i)
        consider(q_lo + (p_tot - q_lo) * i / kGrid);
    const double q_seed =
        std::clamp(real_trace_product(b, seed_w) / b1, q_lo, p_tot);
    consider(q_seed);

    // Golden-section refinement around the two candidate neighborhoods.
    const double h = (p_tot - q_lo) / kGrid;
    const auto refine = [&](double center) {
        double lo = std::max(q_lo, center - h);
        double hi = std::min(p_tot, center + h);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo);
        double x2 = lo + gr * (hi - lo);
        double f1 = value(x1);
        double f2 = value(x2);
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, p_tot);
             ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = value(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = value(x1);
            }
        }
        consider(0.5 * (lo + hi));
    };
    refine(best_q);
    refine(q_seed);

    const double q = best_q;
    const std::complex<double> phase =
        a1 > 0.0 ? c / a1 : std::complex<double>(1.0, 0.0);
    Eigen::VectorXcd wvec = std::sqrt(q) * phase * e1;
    if (has_e2)
        wvec += std::sqrt(std::max(0.0, p_tot - q)) * (resid / a2);
    return wvec * wvec.adjoint();
}

} // namespace

SdpSolution solve_subproblem(const SdpSubproblem& sp, double tol) {
    SdpSolution out;
    const Eigen::Index n = sp.signal_outer.rows();

    if (sp.signal_outer.cols() != n || sp.interference_outer.rows() != n ||
        sp.interference_outer.cols() != n || sp.expansion_point.rows() != n ||
        sp.expansion_point.cols() != n)
        throw std::invalid_argument("solve_subproblem: dimension mismatch");
    if (!is_hermitian(sp.signal_outer, 1e-12) ||
        !is_hermitian(sp.interference_outer, 1e-12))
        throw std::invalid_argument("solve_subproblem: constraint matrices not Hermitian");
    if (sp.max_power <= 0.0 || sp.noise_power <= 0.0)
        throw std::invalid_argument("solve_subproblem: max_power and noise must be positive");

    if (!subproblem_feasible(sp)) {
        out.status = SolveStatus::Infeasible;
        out.message = "required backscatter power exceeds the maximum reachable value";
        return out;
    }

    // Work in noise-normalized units (divide both quadratic forms and the
    // floor by the noise power). The surrogate value is invariant under
    // this scaling, but the floor constraint becomes O(1), which keeps the
    // active-set slacks far above the double-precision resolution that the
    // raw watt-scale problem runs into.
    const Eigen::MatrixXcd a = sp.signal_outer / sp.noise_power;
    const Eigen::MatrixXcd b = sp.interference_outer / sp.noise_power;
    const double t_min = sp.min_backscatter_power / sp.noise_power;
    const bool has_floor = t_min > 0.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_b(b);
    const double lam_max_b = std::max(0.0, es_b.eigenvalues().maxCoeff());

    // Razor-thin interior: the floor nearly equals the reachable maximum, so
    // the feasible set collapses to (almost) one point. Return it directly.
    if (has_floor && t_min >= sp.max_power * lam_max_b * (1.0 - 1e-9)) {
        const Eigen::VectorXcd v = es_b.eigenvectors().col(n - 1);
        out.w_matrix = sp.max_power * (v * v.adjoint());
        out.status = SolveStatus::Ok;
        out.surrogate_value = surrogate_objective(out.w_matrix, sp);
        out.kkt_residual = 0.0;
        out.eigen_ratio = 0.0;
        out.message = "boundary solution (degenerate feasible set)";
        return out;
    }

    // Strictly feasible start: blend the floor-maximizing direction with the
    // identity at a power level that leaves both trace constraints slack.
    Eigen::MatrixXcd w;
    if (!has_floor) {
        w = 0.5 * sp.max_power / static_cast<double>(n) *
            Eigen::MatrixXcd::Identity(n, n);
    } else {
        const double r = t_min / (sp.max_power * lam_max_b); // in (0, 1)
        const double scale = 0.5 * (1.0 + r);
        const double eps_max =
            n > 1 ? ((1.0 - r) / (1.0 + r)) * static_cast<double>(n) /
                        static_cast<double>(n - 1)
                  : 1.0;
        const double eps = std::min(0.3, 0.5 * eps_max);
        const Eigen::VectorXcd v = es_b.eigenvectors().col(n - 1);
        w = scale * sp.max_power *
            ((1.0 - eps) * (v * v.adjoint()) +
             (eps / static_cast<double>(n)) * Eigen::MatrixXcd::Identity(n, n));
    }

    const Eigen::MatrixXcd combined = a + b;
    const double denom_ref =
        real_trace_product(b, sp.expansion_point) + 1.0;
    const double lin_coeff = 1.0 / (kLn2 * denom_ref);
    const double nu = static_cast<double>(n) + 1.0 + (has_floor ? 1.0 : 0.0);
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);

    auto evaluate = [&](const Eigen::MatrixXcd& m) {
        IterateState s;
        s.numer = real_trace_product(combined, m) + 1.0;
        s.trace_b = real_trace_product(b, m);
        s.power_gap = sp.max_power - m.real().trace();
        s.floor_gap = has_floor ? s.trace_b - t_min : 1.0;
        Eigen::LLT<Eigen::MatrixXcd> llt(m);
        if (llt.info() != Eigen::Success || s.power_gap <= 0.0 ||
            s.floor_gap <= 0.0 || s.numer <= 0.0)
            return s;
        s.interior = true;
        double ld = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            ld += std::log(std::real(llt.matrixL()(i, i)));
        s.logdet = 2.0 * ld;
        return s;
    };

    double t = 1.0;
    const double mu = 10.0;
    int total_steps = 0;
    const int max_total_steps = 4000;

    IterateState st = evaluate(w);
    if (!st.interior) {
        out.status = SolveStatus::NumericalFailure;
        out.message = "failed to construct a strictly feasible start";
        return out;
    }

    while (true) {
        // Center at the current t with damped Newton steps.
        for (int step = 0; step < 80; ++step) {
            if (++total_steps > max_total_steps) {
                out.status = SolveStatus::NumericalFailure;
                out.message = "Newton iteration budget exhausted";
                out.newton_steps = total_steps;
                return out;
            }

            Eigen::LLT<Eigen::MatrixXcd> llt(w);
            if (llt.info() != Eigen::Success) {
                out.status = SolveStatus::NumericalFailure;
                out.message = "iterate left the PSD cone";
                out.newton_steps = total_steps;
                return out;
            }
            const Eigen::MatrixXcd w_inv = llt.solve(eye);

            Eigen::MatrixXcd grad = (t / (kLn2 * st.numer)) * combined -
                                    (t * lin_coeff) * b + w_inv -
                                    (1.0 / st.power_gap) * eye;
            if (has_floor)
                grad += (1.0 / st.floor_gap) * b;
            grad = 0.5 * (grad + grad.adjoint().eval());

            // The negated Hessian is W^-1 (.) W^-1 plus rank-one trace terms
            // c_i Tr(M_i .) M_i; invert it via Sherman-Morrison-Woodbury,
            // where applying the inverse of the first part is W (.) W.
            std::vector<const Eigen::MatrixXcd*> ms{&combined, &eye};
            std::vector<double> cs{t / (kLn2 * st.numer * st.numer),
                                   1.0 / (st.power_gap * st.power_gap)};
            if (has_floor) {
                ms.push_back(&b);
                cs.push_back(1.0 / (st.floor_gap * st.floor_gap));
            }
            const int mcount = static_cast<int>(ms.size());

            const Eigen::MatrixXcd wgw = w * grad * w;
            std::vector<Eigen::MatrixXcd> wmw(mcount);
            for (int i = 0; i < mcount; ++i)
                wmw[i] = w * (*ms[i]) * w;

            Eigen::MatrixXd sys(mcount, mcount);
            Eigen::VectorXd rhs(mcount);
            for (int j = 0; j < mcount; ++j) {
                rhs[j] = real_trace_product(*ms[j], wgw);
                for (int i = 0; i < mcount; ++i)
                    sys(j, i) = (i == j ? 1.0 : 0.0) +
                                cs[i] * real_trace_product(*ms[j], wmw[i]);
            }
            const Eigen::VectorXd sv = sys.partialPivLu().solve(rhs);

            Eigen::MatrixXcd delta = wgw;
            for (int i = 0; i < mcount; ++i)
                delta -= cs[i] * sv[i] * wmw[i];
            delta = 0.5 * (delta + delta.adjoint().eval());

            const double decrement_sq = real_trace_product(grad, delta);
            if (decrement_sq <= 1e-14)
                break;

            // Damped Newton: the objective is self-concordant, so the step
            // 1/(1+lambda) stays in the domain and makes guaranteed progress
            // without any value-based line search (which loses all precision
            // once t * objective outgrows double resolution).
            const double lambda = std::sqrt(std::max(0.0, decrement_sq));
            double alpha = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;

            bool moved = false;
            for (int bt = 0; bt < 60 && !moved; ++bt) {
                const Eigen::MatrixXcd cand = w + alpha * delta;
                const IterateState cand_st = evaluate(cand);
                if (cand_st.interior) {
                    w = cand;
                    st = cand_st;
                    moved = true;
                }
                alpha *= 0.5;
            }
            if (!moved)
                break; // rounding has exhausted the representable progress
        }

        if (nu / t <= tol)
            break;
        t *= mu;
    }

    out.status = SolveStatus::Ok;
    out.w_matrix = w;
    out.surrogate_value = surrogate_objective(w, sp);
    out.kkt_residual = nu / t;
    out.eigen_ratio = rank_one_gap(w);
    out.newton_steps = total_steps;

    // Rank-one polish. Both quadratic forms are rank one, so projecting any
    // feasible W onto span{h_u, h_b} preserves the objective and both trace
    // constraints while only releasing power: the optimum is a rank-one
    // matrix in that span. Reduce to the scalar problem in the backscatter
    // feed q = Tr(BW) / lambda_max(B) at full power and solve it to machine
    // precision. The barrier iterate supplies the certificate (duality gap,
    // eigen ratio); the polish removes its centering noise, which the
    // surrogate-ascent checks downstream are sensitive to.
    {
        const Eigen::MatrixXcd polished = detail_span_polish(
            a, b, t_min, has_floor, sp.max_power, denom_ref, w);
        if (polished.size() != 0) {
            const double value = surrogate_objective(polished, sp);
            if (value >= out.surrogate_value - 1e-6) {
                out.w_matrix = polished;
                out.surrogate_value = value;
            }
        }
    }
    return out;
}

} // namespace masr
