#include "dre/dense_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace dre {

namespace {

Eigen::MatrixXd sym(const Eigen::MatrixXd& x) {
    return 0.5 * (x + x.transpose());
}

Eigen::MatrixXd dense_eval(const DreProblem& prob, double t) {
    return Eigen::MatrixXd(prob.A.eval(t));
}

Eigen::MatrixXd riccati(const DreProblem& prob, double t,
                        const Eigen::MatrixXd& x) {
    Eigen::MatrixXd a = dense_eval(prob, t);
    Eigen::MatrixXd xb = x * prob.B;
    return prob.C.transpose() * prob.C + a.transpose() * x + x * a -
           xb * xb.transpose();
}

}  // namespace

Eigen::MatrixXd dense_lyap(const Eigen::MatrixXd& ahat,
                           const Eigen::MatrixXd& rhs) {
    const Eigen::Index n = ahat.rows();
    Eigen::RealSchur<Eigen::MatrixXd> schur(ahat);
    const Eigen::MatrixXd& qm = schur.matrixU();
    const Eigen::MatrixXd& tm = schur.matrixT();

    // 1x1 / 2x2 diagonal block partition
    std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;
    const double tiny = 1e-14 * (1.0 + tm.norm());
    for (Eigen::Index p = 0; p < n;) {
        if (p + 1 < n && std::abs(tm(p + 1, p)) > tiny) {
            blocks.emplace_back(p, 2);
            p += 2;
        } else {
            blocks.emplace_back(p, 1);
            p += 1;
        }
    }

    Eigen::MatrixXd c = -qm.transpose() * rhs * qm;
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [qs, qw] : blocks) {
        for (const auto& [ps, pw] : blocks) {
            Eigen::MatrixXd m = c.block(ps, qs, pw, qw);
            if (ps > 0)
                m -= tm.block(0, ps, ps, pw).transpose() *
                     y.block(0, qs, ps, qw);
            if (qs > 0)
                m -= y.block(ps, 0, pw, qs) * tm.block(0, qs, qs, qw);
            // (I (x) Tpp^T + Tqq^T (x) I) vec(Ypq) = vec(m)
            Eigen::MatrixXd tpp = tm.block(ps, ps, pw, pw);
            Eigen::MatrixXd tqq = tm.block(qs, qs, qw, qw);
            Eigen::MatrixXd sys =
                Eigen::MatrixXd::Zero(pw * qw, pw * qw);
            for (Eigen::Index j = 0; j < qw; ++j)
                sys.block(j * pw, j * pw, pw, pw) = tpp.transpose();
            for (Eigen::Index j = 0; j < qw; ++j)
                for (Eigen::Index l = 0; l < qw; ++l)
                    sys.block(j * pw, l * pw, pw, pw) +=
                        tqq(l, j) * Eigen::MatrixXd::Identity(pw, pw);
            Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(
                m.data(), pw * qw);
            Eigen::VectorXd sol = sys.fullPivLu().solve(v);
            y.block(ps, qs, pw, qw) =
                Eigen::Map<Eigen::MatrixXd>(sol.data(), pw, qw);
        }
    }
    Eigen::MatrixXd x = qm * y * qm.transpose();

    const double scale = rhs.norm();
    const double res =
        (ahat.transpose() * x + x * ahat + rhs).norm();
    if (scale > 0 && res > 1e-10 * scale)
        throw std::runtime_error("dense_lyap: residual too large");
    return x;
}

Eigen::MatrixXd dense_lyap_kron(const Eigen::MatrixXd& ahat,
                                const Eigen::MatrixXd& rhs) {
    const Eigen::Index n = ahat.rows();
    if (n > 60) throw std::invalid_argument("dense_lyap_kron: n > 60");
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(n * n, n * n);
    Eigen::MatrixXd at = ahat.transpose();
    for (Eigen::Index j = 0; j < n; ++j)
        sys.block(j * n, j * n, n, n) = at;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index l = 0; l < n; ++l)
            sys.block(j * n, l * n, n, n) +=
                at(j, l) * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b = -Eigen::Map<const Eigen::VectorXd>(rhs.data(), n * n);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
    if (!lu.isInvertible())
        throw std::runtime_error("dense_lyap_kron: singular system");
    Eigen::VectorXd sol = lu.solve(b);
    return Eigen::Map<Eigen::MatrixXd>(sol.data(), n, n);
}

Eigen::MatrixXd dense_are_newton(const Eigen::MatrixXd& atil,
                                 const Eigen::MatrixXd& stil,
                                 const Eigen::MatrixXd& wtil,
                                 const Eigen::MatrixXd& x0, double tol,
                                 int max_iter) {
    const double scale = wtil.norm() > 0 ? wtil.norm() : 1.0;
    Eigen::MatrixXd x = x0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::MatrixXd ahat = atil - stil * x;
        x = sym(dense_lyap(ahat, wtil + x * stil * x));
        const double res =
            (atil.transpose() * x + x * atil - x * stil * x + wtil).norm() /
            scale;
        if (res <= tol) return x;
    }
    throw std::runtime_error("dense_are_newton: no convergence");
}

DenseState dense_startup(const DreProblem& prob,
                         const PeerCoefficients& coeffs, double tau,
                         int substeps) {
    const Eigen::Index n = prob.n();
    Eigen::MatrixXd x0 = Eigen::MatrixXd::Zero(n, n);
    if (prob.X0.rank() > 0) x0 = prob.X0.L * prob.X0.D * prob.X0.L.transpose();

    DenseState st;
    st.t = prob.t0;
    st.tau = tau;
    for (int j = 0; j < coeffs.s; ++j) {
        const double target = prob.t0 + (coeffs.c[j] - 1.0) * tau;
        Eigen::MatrixXd x = x0;
        if (coeffs.c[j] != 1.0) {
            const double h = (target - prob.t0) / substeps;
            double t = prob.t0;
            for (int k = 0; k < substeps; ++k) {
                Eigen::MatrixXd r1 = riccati(prob, t, x);
                Eigen::MatrixXd r2 = riccati(prob, t + h, x + h * r1);
                x = sym(x + (h / 2) * (r1 + r2));
                t += h;
            }
        }
        st.stages.push_back(x);
    }
    return st;
}

DenseState dense_step(Scheme scheme, const DenseState& state,
                      const PeerCoefficients& coeffs, const DreProblem& prob) {
    const int s = coeffs.s;
    const double tau = state.tau;
    const Eigen::Index n = prob.n();
    const Eigen::MatrixXd ss = prob.B * prob.B.transpose();
    const Eigen::MatrixXd ww = prob.C.transpose() * prob.C;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);

    DenseState next;
    next.t = state.t + tau;
    next.tau = tau;

    if (scheme == Scheme::ImplicitPeer) {
        Eigen::MatrixXd warm = state.stages[s - 1];
        for (int i = 0; i < s; ++i) {
            const double t_ki = state.t + coeffs.c[i] * tau;
            const double tg = tau * coeffs.G(i, i);
            Eigen::MatrixXd atil =
                tg * dense_eval(prob, t_ki) - 0.5 * eye;
            Eigen::MatrixXd wtil = tg * ww;
            for (int j = 0; j < s; ++j) {
                wtil += coeffs.B(i, j) * state.stages[j];
                wtil += tau * coeffs.A(i, j) *
                        riccati(prob, state.t + (coeffs.c[j] - 1) * tau,
                                state.stages[j]);
            }
            for (int j = 0; j < i; ++j)
                wtil += tau * coeffs.G(i, j) *
                        riccati(prob, state.t + coeffs.c[j] * tau,
                                next.stages[j]);
            warm = dense_are_newton(atil, tg * ss, sym(wtil), warm);
            next.stages.push_back(warm);
        }
        return next;
    }

    const Eigen::MatrixXd a_k = dense_eval(prob, state.t);
    if (scheme == Scheme::RosPeer) {
        const Eigen::MatrixXd& x_k = state.stages[s - 1];
        Eigen::MatrixXd ahat = a_k - ss * x_k;
        Eigen::MatrixXd atil = tau * coeffs.gamma * ahat - 0.5 * eye;
        for (int i = 0; i < s; ++i) {
            Eigen::MatrixXd wtil = Eigen::MatrixXd::Zero(n, n);
            for (int j = 0; j < s; ++j) {
                const Eigen::MatrixXd& xp = state.stages[j];
                wtil += coeffs.B(i, j) * xp;
                wtil += tau * coeffs.A(i, j) *
                        (riccati(prob, state.t + (coeffs.c[j] - 1) * tau, xp) -
                         (ahat.transpose() * xp + xp * ahat));
            }
            for (int j = 0; j < i; ++j) {
                const Eigen::MatrixXd& xc = next.stages[j];
                wtil += tau * coeffs.G(i, j) *
                        (ahat.transpose() * xc + xc * ahat);
            }
            next.stages.push_back(sym(dense_lyap(atil, sym(wtil))));
        }
        return next;
    }

    // modified scheme on the auxiliary variables
    TransformedCoefficients tc = transform(coeffs);
    std::vector<Eigen::MatrixXd> xprev =
        dense_reconstruct(scheme, state, coeffs);
    const Eigen::MatrixXd& x_k = xprev[s - 1];
    Eigen::MatrixXd ahat = a_k - ss * x_k;
    Eigen::MatrixXd atil = ahat - 1.0 / (2.0 * tau * coeffs.gamma) * eye;
    for (int i = 0; i < s; ++i) {
        Eigen::MatrixXd wtil = Eigen::MatrixXd::Zero(n, n);
        for (int j = 0; j < s; ++j) {
            const Eigen::MatrixXd& yp = state.stages[j];
            wtil += (tc.boldB(i, j) / tau) * yp;
            wtil += coeffs.A(i, j) *
                    riccati(prob, state.t + (coeffs.c[j] - 1) * tau, xprev[j]);
            wtil -= tc.boldA(i, j) * (ahat.transpose() * yp + yp * ahat);
        }
        for (int j = 0; j < i; ++j)
            wtil -= (tc.Ginv(i, j) / tau) * next.stages[j];
        next.stages.push_back(sym(dense_lyap(atil, sym(wtil))));
    }
    return next;
}

std::vector<Eigen::MatrixXd> dense_reconstruct(Scheme scheme,
                                               const DenseState& state,
                                               const PeerCoefficients& coeffs) {
    if (scheme != Scheme::ModRosPeer) return state.stages;
    TransformedCoefficients tc = transform(coeffs);
    std::vector<Eigen::MatrixXd> x;
    for (int j = 0; j < coeffs.s; ++j) {
        Eigen::MatrixXd xj =
            Eigen::MatrixXd::Zero(state.stages[0].rows(),
                                  state.stages[0].cols());
        for (int l = 0; l <= j; ++l) xj += tc.Ginv(j, l) * state.stages[l];
        x.push_back(std::move(xj));
    }
    return x;
}

namespace {

// Modified Rosenbrock-type run; records reconstructed last-stage values at
// the requested grid times.
std::vector<Eigen::MatrixXd> mros2_trajectory(
    const DreProblem& prob, const std::vector<double>& t_grid,
    double tau_ref) {
    const PeerCoefficients coeffs = rosenbrock2_coefficients();
    const long steps = std::lround((prob.tf - prob.t0) / tau_ref);
    if (std::abs(prob.t0 + steps * tau_ref - prob.tf) > 1e-9)
        throw std::invalid_argument("reference_solution: tau_ref must divide "
                                    "the time interval");
    std::vector<long> grid_steps;
    for (double t : t_grid) {
        const long k = std::lround((t - prob.t0) / tau_ref);
        if (k < 0 || k > steps ||
            std::abs(prob.t0 + k * tau_ref - t) > 1e-9)
            throw std::invalid_argument(
                "reference_solution: grid time off the step lattice");
        grid_steps.push_back(k);
    }

    DenseState y0 = dense_startup(prob, coeffs, tau_ref);
    // transform the startup window to auxiliary variables
    DenseState st = y0;
    for (int j = 0; j < coeffs.s; ++j) {
        st.stages[j].setZero();
        for (int l = 0; l <= j; ++l)
            st.stages[j] += coeffs.G(j, l) * y0.stages[l];
    }

    std::vector<Eigen::MatrixXd> out(t_grid.size());
    auto record = [&](long k) {
        for (size_t g = 0; g < grid_steps.size(); ++g)
            if (grid_steps[g] == k)
                out[g] = dense_reconstruct(Scheme::ModRosPeer, st,
                                           coeffs)[coeffs.s - 1];
    };
    record(0);
    for (long k = 1; k <= steps; ++k) {
        st = dense_step(Scheme::ModRosPeer, st, coeffs, prob);
        record(k);
    }
    return out;
}

}  // namespace

std::vector<Eigen::MatrixXd> reference_solution(
    const DreProblem& prob, const std::vector<double>& t_grid, double tau_ref,
    double richardson_tol) {
    std::vector<Eigen::MatrixXd> coarse =
        mros2_trajectory(prob, t_grid, tau_ref);
    std::vector<Eigen::MatrixXd> fine =
        mros2_trajectory(prob, t_grid, tau_ref / 2);
    const Eigen::MatrixXd& xc = coarse.back();
    const Eigen::MatrixXd& xf = fine.back();
    const double scale = xf.norm() > 0 ? xf.norm() : 1.0;
    if ((xc - xf).norm() / scale > richardson_tol)
        throw std::runtime_error(
            "reference_solution: step-halving check failed");
    return fine;
}

}  // namespace dre
