#include "dre/peer_implicit.hpp"

#include <stdexcept>

namespace dre {

namespace {

Eigen::Index sum_ranks(const std::vector<LdlPair>& xs, size_t upto) {
    Eigen::Index total = 0;
    for (size_t j = 0; j < upto && j < xs.size(); ++j) total += xs[j].rank();
    return total;
}

// W-tilde blocks of the stage-(i) ALE right-hand side, Newton block excluded.
std::vector<LdlTerm> wtil_terms(const PeerState& state,
                                const PeerCoefficients& p, int i,
                                const std::vector<LdlPair>& cur,
                                const std::vector<RiccatiOpFactors>& cur_f,
                                const DreProblem& prob, bool autonomous) {
    const double tau = state.tau;
    std::vector<LdlTerm> terms;
    const Eigen::Index q = prob.q();
    double wq = tau * p.G(i, i);
    if (autonomous)
        wq = tau * (p.A.row(i).sum() + p.G.row(i).head(i + 1).sum());
    terms.emplace_back(prob.C.transpose(),
                       Eigen::MatrixXd::Identity(q, q), wq);
    for (int j = 0; j < p.s; ++j)
        terms.emplace_back(state.stages[j].L, state.stages[j].D, p.B(i, j));
    for (int j = 0; j < p.s; ++j)
        terms.emplace_back(state.factors[j].T, state.factors[j].M,
                           tau * p.A(i, j));
    for (int j = 0; j < i; ++j)
        terms.emplace_back(cur_f[j].T, cur_f[j].M, tau * p.G(i, j));
    return terms;
}

Eigen::Index wtil_width(const PeerState& state, const PeerCoefficients& p,
                        int i, const std::vector<LdlPair>& cur,
                        const DreProblem& prob, bool autonomous) {
    const Eigen::Index q = prob.q();
    const Eigen::Index prev = sum_ranks(state.stages, p.s);
    const Eigen::Index curr = sum_ranks(cur, static_cast<size_t>(i));
    return autonomous ? q + 3 * prev + 2 * curr
                      : (p.s + i + 1) * q + 3 * prev + 2 * curr;
}

}  // namespace

RiccatiOpFactors riccati_op_factors(const SparseMatrix& a,
                                    const Eigen::MatrixXd& b,
                                    const Eigen::MatrixXd& c, const LdlPair& x,
                                    bool autonomous) {
    const Eigen::Index q = c.rows(), k = x.rank(), n = x.rows();
    const Eigen::Index off = autonomous ? 0 : q;

    RiccatiOpFactors f;
    f.T.resize(n, off + 2 * k);
    f.M = Eigen::MatrixXd::Zero(off + 2 * k, off + 2 * k);
    if (!autonomous) {
        f.T.leftCols(q) = c.transpose();
        f.M.topLeftCorner(q, q).setIdentity();
    }
    if (k > 0) {
        f.T.middleCols(off, k) = spmv_t(a, x.L);
        f.T.rightCols(k) = x.L;
        f.M.block(off, off + k, k, k) = x.D;
        f.M.block(off + k, off, k, k) = x.D;
        Eigen::MatrixXd bl = b.transpose() * x.L;  // m x k
        f.M.bottomRightCorner(k, k) = -x.D * bl.transpose() * bl * x.D;
    }
    return f;
}

LdlPair assemble_implicit_rhs(const PeerState& state,
                              const PeerCoefficients& coeffs, int i,
                              const std::vector<LdlPair>& cur,
                              const std::vector<RiccatiOpFactors>& cur_factors,
                              const LdlPair& x_newton, const DreProblem& prob) {
    const bool autonomous = prob.A.autonomous();
    const int i0 = i - 1;  // interface uses 1-based stage index
    if (i0 < 0 || i0 >= coeffs.s)
        throw std::invalid_argument("assemble_implicit_rhs: bad stage index");

    std::vector<LdlTerm> terms =
        wtil_terms(state, coeffs, i0, cur, cur_factors, prob, autonomous);
    Eigen::MatrixXd xb = Eigen::MatrixXd::Zero(prob.n(), prob.m());
    if (x_newton.rank() > 0)
        xb = x_newton.L * (x_newton.D * (x_newton.L.transpose() * prob.B));
    terms.emplace_back(std::move(xb),
                       Eigen::MatrixXd::Identity(prob.m(), prob.m()),
                       state.tau * coeffs.G(i0, i0));

    LdlPair rhs = ldl_concat(terms);
    const Eigen::Index expect =
        wtil_width(state, coeffs, i0, cur, prob, autonomous) + prob.m();
    if (rhs.rank() != expect)
        throw std::logic_error("assemble_implicit_rhs: column count mismatch");
    return rhs;
}

PeerState implicit_peer_step(const PeerState& state,
                             const PeerCoefficients& coeffs,
                             const DreProblem& prob, const NewtonConfig& ncfg,
                             const AdiConfig& acfg, StepLog* log) {
    const int s = coeffs.s;
    const bool autonomous = prob.A.autonomous();
    const double tau = state.tau;
    const double ctol = default_compress_tol(prob.n());

    PeerState next;
    next.t = state.t + tau;
    next.tau = tau;
    if (log) log->stages.clear();

    LdlPair warm = state.stages[s - 1];
    for (int i = 0; i < s; ++i) {
        const double t_ki = state.t + coeffs.c[i] * tau;
        SparseMatrix a_ki = prob.A.eval(t_ki);

        std::vector<LdlTerm> terms = wtil_terms(state, coeffs, i, next.stages,
                                                next.factors, prob, autonomous);
        LdlPair wtil = ldl_concat(terms);
        if (wtil.rank() !=
            wtil_width(state, coeffs, i, next.stages, prob, autonomous))
            throw std::logic_error("implicit_peer_step: column count mismatch");
        wtil = column_compress(wtil, ctol);

        AreStageProblem sp;
        sp.A = &a_ki;
        sp.tau_g = tau * coeffs.G(i, i);
        sp.B = prob.B;
        sp.Wtil = wtil;
        sp.x0 = warm;
        NewtonReport nrep;
        LdlPair x;
        try {
            x = newton_solve(sp, ncfg, acfg, &nrep);
        } catch (const std::exception& e) {
            throw std::runtime_error("implicit peer stage " +
                                     std::to_string(i + 1) + ": " + e.what());
        }
        next.stages.push_back(x);
        next.factors.push_back(
            riccati_op_factors(a_ki, prob.B, prob.C, x, autonomous));
        if (log)
            log->stages.push_back({i + 1, t_ki, x.rank(), nrep.iterations,
                                   nrep.adi_iterations, nrep.residual});
        warm = x;
    }
    return next;
}

PeerState startup(const DreProblem& prob, const PeerCoefficients& coeffs,
                  double tau, int substeps) {
    const bool autonomous = prob.A.autonomous();
    const double ctol = default_compress_tol(prob.n());

    auto riccati_value = [&](double t, const LdlPair& x) {
        RiccatiOpFactors f = riccati_op_factors(prob.A.eval(t), prob.B, prob.C,
                                                x, /*autonomous=*/false);
        return LdlTerm(std::move(f.T), std::move(f.M), 1.0);
    };

    PeerState st;
    st.t = prob.t0;
    st.tau = tau;
    for (int j = 0; j < coeffs.s; ++j) {
        const double target = prob.t0 + (coeffs.c[j] - 1.0) * tau;
        LdlPair x = prob.X0.rows() == prob.n() ? prob.X0
                                               : LdlPair::zero(prob.n());
        if (coeffs.c[j] != 1.0) {
            // explicit Heun in factored arithmetic, integrating backward
            const double h = (target - prob.t0) / substeps;
            double t = prob.t0;
            for (int k = 0; k < substeps; ++k) {
                LdlTerm r1 = riccati_value(t, x);
                LdlPair x1 = column_compress(
                    ldl_concat({LdlTerm(x, 1.0),
                                LdlTerm(r1.L, r1.D, h)}),
                    ctol);
                LdlTerm r2 = riccati_value(t + h, x1);
                x = column_compress(
                    ldl_concat({LdlTerm(x, 1.0), LdlTerm(r1.L, r1.D, h / 2),
                                LdlTerm(r2.L, r2.D, h / 2)}),
                    ctol);
                t += h;
            }
        }
        st.stages.push_back(x);
        st.factors.push_back(riccati_op_factors(prob.A.eval(target), prob.B,
                                                prob.C, x, autonomous));
    }
    return st;
}

}  // namespace dre
