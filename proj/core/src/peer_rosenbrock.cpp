#include "dre/peer_rosenbrock.hpp"

#include <stdexcept>

namespace dre {

namespace {

Eigen::MatrixXd ldl_times(const LdlPair& x, const Eigen::MatrixXd& b) {
    if (x.rank() == 0 || b.cols() == 0)
        return Eigen::MatrixXd::Zero(x.rows(), b.cols());
    return x.L * (x.D * (x.L.transpose() * b));
}

Eigen::MatrixXd hcat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows(), a.cols() + b.cols());
    out << a, b;
    return out;
}

Eigen::Index sum_ranks(const std::vector<LdlPair>& xs, size_t upto) {
    Eigen::Index total = 0;
    for (size_t j = 0; j < upto && j < xs.size(); ++j) total += xs[j].rank();
    return total;
}

// D L^T B B^T L D for the quadratic part of a Riccati-operator core.
Eigen::MatrixXd quad_core(const LdlPair& x, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd bl = b.transpose() * x.L;  // m x k
    return x.D * bl.transpose() * bl * x.D;
}

}  // namespace

RosWindow ros_window(const PeerState& state) {
    return RosWindow{state.stages, state.t, state.tau};
}

AuxWindow make_aux_window(const RosWindow& win,
                          const PeerCoefficients& coeffs) {
    AuxWindow aux;
    aux.t = win.t;
    aux.tau = win.tau;
    aux.x = win.stages;
    const double ctol = default_compress_tol(win.stages.front().rows());
    for (int j = 0; j < coeffs.s; ++j) {
        std::vector<LdlTerm> terms;
        for (int l = 0; l <= j; ++l)
            terms.emplace_back(win.stages[l], coeffs.G(j, l));
        aux.y.push_back(column_compress(ldl_concat(terms), ctol));
    }
    return aux;
}

RosWindow standard_step(const RosWindow& state, const PeerCoefficients& coeffs,
                        const DreProblem& prob, const AdiConfig& acfg,
                        StepLog* log) {
    const int s = coeffs.s;
    const double tau = state.tau;
    const double gamma = coeffs.gamma;
    const bool aut = prob.A.autonomous();
    const Eigen::Index n = prob.n(), m = prob.m(), q = prob.q();
    const double ctol = default_compress_tol(n);
    if (coeffs.kind != PeerCoefficients::Kind::Rosenbrock)
        throw std::invalid_argument("standard_step: needs Rosenbrock-type "
                                    "coefficients");

    const SparseMatrix a_k = prob.A.eval(state.t);
    const LdlPair& x_k = state.stages[s - 1];
    Eigen::MatrixXd xb = ldl_times(x_k, prob.B);
    ShiftedOperator op(a_k, tau * gamma, -0.5, tau * gamma * prob.B, xb);
    const std::vector<std::complex<double>> shifts =
        compute_shifts(op, acfg.shift_count);

    // A(t_{k-1,j})^T L_{k-1,j} for the non-autonomous Acheck blocks
    std::vector<Eigen::MatrixXd> atl_prev(s - 1);
    if (!aut)
        for (int j = 0; j + 1 < s; ++j)
            atl_prev[j] = spmv_t(prob.A.eval(state.t + (coeffs.c[j] - 1) * tau),
                                 state.stages[j].L);

    RosWindow next;
    next.t = state.t + tau;
    next.tau = tau;
    if (log) log->stages.clear();

    for (int i = 0; i < s; ++i) {
        std::vector<LdlTerm> terms;
        for (int j = 0; j < i; ++j) {
            const LdlPair& xk_j = next.stages[j];
            terms.emplace_back(hcat(spmv_t(a_k, xk_j.L), xk_j.L),
                               swap_core(xk_j.D), tau * coeffs.G(i, j));
        }
        Eigen::MatrixXd kb = (coeffs.A(i, s - 1) / 2.0) * xb;
        for (int j = 0; j + 1 < s; ++j)
            kb += coeffs.A(i, j) * ldl_times(state.stages[j], prob.B);
        for (int j = 0; j < i; ++j)
            kb -= coeffs.G(i, j) * ldl_times(next.stages[j], prob.B);
        kb *= tau;
        terms.emplace_back(hcat(xb, kb), swap_core(Eigen::MatrixXd::Identity(m, m)),
                           1.0);
        if (!aut) {
            for (int j = 0; j + 1 < s; ++j) {
                const LdlPair& xp = state.stages[j];
                const Eigen::Index k = xp.rank();
                const double ta = tau * coeffs.A(i, j);
                Eigen::MatrixXd acheck_l =
                    ta * (atl_prev[j] - spmv_t(a_k, xp.L)) +
                    (coeffs.B(i, j) / 2.0) * xp.L;
                Eigen::MatrixXd t_blk(n, q + 2 * k);
                t_blk << prob.C.transpose(), acheck_l, xp.L;
                Eigen::MatrixXd m_blk = Eigen::MatrixXd::Zero(q + 2 * k,
                                                              q + 2 * k);
                m_blk.topLeftCorner(q, q) =
                    ta * Eigen::MatrixXd::Identity(q, q);
                m_blk.block(q, q + k, k, k) = xp.D;
                m_blk.block(q + k, q, k, k) = xp.D;
                m_blk.bottomRightCorner(k, k) = -ta * quad_core(xp, prob.B);
                terms.emplace_back(std::move(t_blk), std::move(m_blk), 1.0);
            }
            terms.emplace_back(prob.C.transpose(),
                               Eigen::MatrixXd::Identity(q, q),
                               tau * coeffs.A(i, s - 1));
            terms.emplace_back(x_k.L, x_k.D, coeffs.B(i, s - 1));
        } else {
            terms.emplace_back(prob.C.transpose(),
                               Eigen::MatrixXd::Identity(q, q),
                               tau * coeffs.A.row(i).sum());
            for (int j = 0; j + 1 < s; ++j) {
                const LdlPair& xp = state.stages[j];
                Eigen::MatrixXd core = coeffs.B(i, j) * xp.D -
                                       tau * coeffs.A(i, j) *
                                           quad_core(xp, prob.B);
                terms.emplace_back(xp.L, std::move(core), 1.0);
            }
            terms.emplace_back(x_k.L, x_k.D, coeffs.B(i, s - 1));
        }

        LdlPair rhs = ldl_concat(terms);
        const Eigen::Index cur2 = 2 * sum_ranks(next.stages, i);
        const Eigen::Index prev = sum_ranks(state.stages, s - 1);
        const Eigen::Index expect =
            aut ? cur2 + prev + x_k.rank() + q + 2 * m
                : cur2 + 2 * prev + x_k.rank() + s * q + 2 * m;
        if (rhs.rank() != expect)
            throw std::logic_error("standard_step: column count mismatch");

        AleProblem ale{&op, column_compress(rhs, ctol)};
        AdiReport rep;
        LdlPair x;
        try {
            x = adi_solve(ale, acfg, &rep, &shifts);
        } catch (const std::exception& e) {
            throw std::runtime_error("rosenbrock peer stage " +
                                     std::to_string(i + 1) + ": " + e.what());
        }
        next.stages.push_back(x);
        if (log)
            log->stages.push_back({i + 1, state.t + coeffs.c[i] * tau,
                                   x.rank(), 0, rep.iterations, rep.residual});
    }
    return next;
}

AuxWindow modified_step(const AuxWindow& state, const PeerCoefficients& coeffs,
                        const TransformedCoefficients& tc,
                        const DreProblem& prob, const AdiConfig& acfg,
                        StepLog* log) {
    const int s = coeffs.s;
    const double tau = state.tau;
    const double gamma = coeffs.gamma;
    const bool aut = prob.A.autonomous();
    const Eigen::Index n = prob.n(), m = prob.m(), q = prob.q();
    const double ctol = default_compress_tol(n);
    if (coeffs.kind != PeerCoefficients::Kind::Rosenbrock)
        throw std::invalid_argument("modified_step: needs Rosenbrock-type "
                                    "coefficients");

    const SparseMatrix a_k = prob.A.eval(state.t);
    const LdlPair& x_k = state.x[s - 1];
    Eigen::MatrixXd xb = ldl_times(x_k, prob.B);
    ShiftedOperator op(a_k, 1.0, -1.0 / (2.0 * tau * gamma), prob.B, xb);
    const std::vector<std::complex<double>> shifts =
        compute_shifts(op, acfg.shift_count);

    AuxWindow next;
    next.t = state.t + tau;
    next.tau = tau;
    if (log) log->stages.clear();

    for (int i = 0; i < s; ++i) {
        Eigen::MatrixXd kb = -(coeffs.A(i, s - 1) / 2.0) * xb;
        for (int j = 0; j < s; ++j)
            kb += tc.boldA(i, j) * ldl_times(state.y[j], prob.B);

        std::vector<LdlTerm> terms;
        if (!aut) {
            for (int j = 0; j < s; ++j) {
                const LdlPair& yp = state.y[j];
                // Acheck^T Lhat with Acheck = boldA*A_k - boldB/(2 tau) * I
                Eigen::MatrixXd acheck_l =
                    tc.boldA(i, j) * spmv_t(a_k, yp.L) -
                    (tc.boldB(i, j) / (2.0 * tau)) * yp.L;
                terms.emplace_back(hcat(acheck_l, yp.L), swap_core(yp.D),
                                   -1.0);
            }
            terms.emplace_back(hcat(xb, kb),
                               swap_core(Eigen::MatrixXd::Identity(m, m)),
                               1.0);
            for (int j = 0; j + 1 < s; ++j) {
                RiccatiOpFactors f = riccati_op_factors(
                    prob.A.eval(state.t + (coeffs.c[j] - 1) * tau), prob.B,
                    prob.C, state.x[j], /*autonomous=*/false);
                terms.emplace_back(std::move(f.T), std::move(f.M),
                                   coeffs.A(i, j));
            }
            terms.emplace_back(prob.C.transpose(),
                               Eigen::MatrixXd::Identity(q, q),
                               coeffs.A(i, s - 1));
            terms.emplace_back(hcat(spmv_t(a_k, x_k.L), x_k.L),
                               swap_core(x_k.D), coeffs.A(i, s - 1));
            for (int j = 0; j < i; ++j)
                terms.emplace_back(next.y[j].L, next.y[j].D,
                                   -tc.Ginv(i, j) / tau);
        } else {
            terms.emplace_back(prob.C.transpose(),
                               Eigen::MatrixXd::Identity(q, q),
                               coeffs.A.row(i).sum());
            for (int j = 0; j + 1 < s; ++j)
                terms.emplace_back(ldl_times(state.x[j], prob.B),
                                   Eigen::MatrixXd::Identity(m, m),
                                   -coeffs.A(i, j));
            terms.emplace_back(hcat(xb, kb),
                               swap_core(Eigen::MatrixXd::Identity(m, m)),
                               1.0);
            for (int j = 0; j < s; ++j)
                terms.emplace_back(state.y[j].L, state.y[j].D,
                                   tc.boldB(i, j) / tau);
            for (int j = 0; j < i; ++j)
                terms.emplace_back(next.y[j].L, next.y[j].D,
                                   -tc.Ginv(i, j) / tau);
        }

        LdlPair rhs = ldl_concat(terms);
        const Eigen::Index ycur = sum_ranks(next.y, i);
        const Eigen::Index yprev = sum_ranks(state.y, s);
        const Eigen::Index expect =
            aut ? ycur + yprev + q + (s + 1) * m
                : ycur + 2 * yprev + 2 * sum_ranks(state.x, s - 1) +
                      2 * x_k.rank() + s * q + 2 * m;
        if (rhs.rank() != expect)
            throw std::logic_error("modified_step: column count mismatch");

        AleProblem ale{&op, column_compress(rhs, ctol)};
        AdiReport rep;
        LdlPair y;
        try {
            y = adi_solve(ale, acfg, &rep, &shifts);
        } catch (const std::exception& e) {
            throw std::runtime_error("modified rosenbrock peer stage " +
                                     std::to_string(i + 1) + ": " + e.what());
        }
        next.y.push_back(y);
        if (log)
            log->stages.push_back({i + 1, state.t + coeffs.c[i] * tau,
                                   y.rank(), 0, rep.iterations, rep.residual});
    }

    // reconstruct the original variables: x_j = sum_{l<=j} Ginv(j,l) y_l
    for (int j = 0; j < s; ++j) {
        std::vector<LdlTerm> terms;
        for (int l = 0; l <= j; ++l)
            terms.emplace_back(next.y[l], tc.Ginv(j, l));
        next.x.push_back(column_compress(ldl_concat(terms), ctol));
    }
    return next;
}

}  // namespace dre
