#include "dre/adi.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dre {

namespace {

using Complex = std::complex<double>;

// Modified Gram-Schmidt Arnoldi; returns Ritz values of the projected
// Hessenberg matrix.  Stops early on breakdown.
std::vector<Complex> ritz_values(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& matvec,
    Eigen::Index n, int steps) {
    steps = static_cast<int>(std::min<Eigen::Index>(steps, n));
    if (steps < 1) return {};
    Eigen::MatrixXd v(n, steps + 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(steps + 1, steps);
    v.col(0) = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
    int m = 0;
    for (int j = 0; j < steps; ++j) {
        Eigen::VectorXd w = matvec(v.col(j));
        for (int i = 0; i <= j; ++i) {
            h(i, j) = v.col(i).dot(w);
            w -= h(i, j) * v.col(i);
        }
        h(j + 1, j) = w.norm();
        m = j + 1;
        if (h(j + 1, j) < 1e-12 * (1.0 + h.col(j).norm())) break;
        v.col(j + 1) = w / h(j + 1, j);
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(h.topLeftCorner(m, m));
    std::vector<Complex> out;
    for (Eigen::Index i = 0; i < m; ++i) out.push_back(es.eigenvalues()[i]);
    return out;
}

double penzl_value(const std::vector<Complex>& chosen, Complex t) {
    double f = 1.0;
    for (Complex p : chosen)
        f *= std::abs((p - t) / (p + std::conj(t)));
    return f;
}

void push_pair(std::vector<Complex>& dst, Complex p) {
    if (p.imag() == 0.0) {
        dst.push_back(p);
    } else {
        if (p.imag() < 0) p = std::conj(p);
        dst.push_back(p);
        dst.push_back(std::conj(p));
    }
}

double gershgorin_shift(const ShiftedOperator& op) {
    const SparseMatrix& a = op.sparse_part();
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        lo = std::min(lo, op.alpha() * a.coeff(i, i) + op.sigma());
    return lo < 0 ? lo : -1.0;
}

}  // namespace

std::vector<Complex> compute_shifts(const ShiftedOperator& op, int count) {
    if (count < 1) throw std::invalid_argument("compute_shifts: count < 1");
    const Eigen::Index n = op.rows();

    std::vector<Complex> cand;
    for (Complex r : ritz_values(
             [&](const Eigen::VectorXd& x) {
                 return Eigen::VectorXd(op.apply(Eigen::MatrixXd(x)));
             },
             n, 20)) {
        if (r.real() < 0) push_pair(cand, r);
    }
    try {
        for (Complex r : ritz_values(
                 [&](const Eigen::VectorXd& x) {
                     return Eigen::VectorXd(op.solve(0.0, Eigen::MatrixXd(x)));
                 },
                 n, 10)) {
            Complex inv = 1.0 / r;
            if (std::abs(r) > 1e-14 && inv.real() < 0) push_pair(cand, inv);
        }
    } catch (const std::runtime_error&) {
        // singular operator at shift 0; large-magnitude Ritz values only
    }

    // deduplicate conjugate representatives
    std::vector<Complex> reps;
    for (Complex p : cand) {
        if (p.imag() < 0) continue;
        bool dup = false;
        for (Complex q : reps)
            if (std::abs(p - q) <= 1e-10 * (1.0 + std::abs(q))) dup = true;
        if (!dup) reps.push_back(p);
    }
    if (reps.empty()) return {Complex(gershgorin_shift(op), 0.0)};

    // Penzl greedy selection over the candidate pool.
    std::vector<Complex> pool;
    for (Complex p : reps) push_pair(pool, p);
    if (static_cast<int>(pool.size()) <= count) return pool;

    std::vector<Complex> chosen;
    Complex first = reps.front();
    double best = std::numeric_limits<double>::infinity();
    for (Complex p : reps) {
        double worst = 0.0;
        for (Complex t : pool)
            worst = std::max(worst, penzl_value({p, std::conj(p)}, t));
        if (worst < best) {
            best = worst;
            first = p;
        }
    }
    push_pair(chosen, first);
    while (static_cast<int>(chosen.size()) < count) {
        Complex next = pool.front();
        double worst = -1.0;
        for (Complex t : pool) {
            double f = penzl_value(chosen, t);
            if (f > worst) {
                worst = f;
                next = t;
            }
        }
        push_pair(chosen, next);
    }
    return chosen;
}

LdlPair adi_solve(const AleProblem& prob, const AdiConfig& cfg,
                  AdiReport* report, const std::vector<Complex>* shifts_in) {
    if (prob.op == nullptr) throw std::invalid_argument("adi_solve: missing operator");
    const ShiftedOperator& op = *prob.op;
    const Eigen::Index n = op.rows();
    const double rel_tol =
        cfg.rel_tol > 0 ? cfg.rel_tol : default_compress_tol(n);
    const double ctol =
        cfg.compress_tol >= 0 ? cfg.compress_tol : default_compress_tol(n);

    AdiReport rep;
    const Eigen::MatrixXd& g = prob.rhs.L;
    const Eigen::MatrixXd& s = prob.rhs.D;
    const double res0 = ldl_frob_norm(prob.rhs);
    if (g.cols() == 0 || res0 == 0.0) {
        if (report) *report = {0, 0.0, true};
        return LdlPair::zero(n);
    }

    std::vector<Complex> shifts =
        shifts_in ? *shifts_in : compute_shifts(op, cfg.shift_count);
    if (shifts.empty()) throw std::runtime_error("adi_solve: empty shift set");

    Eigen::MatrixXd w = g;
    LdlPair x = LdlPair::zero(n);
    size_t si = 0;
    int it = 0;
    double res = 1.0;
    int since_compress = 0;
    while (it < cfg.max_iter) {
        Complex p = shifts[si % shifts.size()];
        ++si;
        std::vector<LdlTerm> terms{LdlTerm(x, 1.0)};
        if (p.imag() == 0.0) {
            Eigen::MatrixXd v = op.solve(p.real(), w);
            terms.emplace_back(v, s, -2.0 * p.real());
            w -= 2.0 * p.real() * v;
            it += 1;
            ++since_compress;
        } else {
            // conjugate pair as one real double step
            if (p.imag() < 0) p = std::conj(p);
            if (si % shifts.size() != 0 &&
                std::abs(shifts[si % shifts.size()] - std::conj(p)) <
                    1e-14 * (1.0 + std::abs(p)))
                ++si;  // consume the stored conjugate
            Eigen::MatrixXcd vc = op.solve(p, w);
            const double d = p.real() / p.imag();
            Eigen::MatrixXd v1 = vc.real() + d * vc.imag();
            Eigen::MatrixXd v2 = std::sqrt(d * d + 1.0) * vc.imag();
            terms.emplace_back(v1, s, -4.0 * p.real());
            terms.emplace_back(v2, s, -4.0 * p.real());
            w -= 4.0 * p.real() * v1;
            it += 2;
            since_compress += 2;
        }
        x = ldl_concat(terms);
        res = ldl_frob_norm(LdlPair(w, s)) / res0;
        if (!std::isfinite(res))
            throw std::runtime_error("adi_solve: non-finite residual (unstable operator?)");
        if (res <= rel_tol) {
            rep.converged = true;
            break;
        }
        if (since_compress >= cfg.compress_every) {
            x = column_compress(x, ctol);
            since_compress = 0;
        }
    }
    x = column_compress(x, ctol);
    rep.iterations = it;
    rep.residual = res;
    if (report) *report = rep;
    return x;
}

double ale_residual(const AleProblem& prob, const LdlPair& x) {
    const ShiftedOperator& op = *prob.op;
    std::vector<LdlTerm> terms;
    if (x.rank() > 0) {
        Eigen::MatrixXd atl = op.apply(x.L);
        Eigen::MatrixXd tl(x.rows(), 2 * x.rank());
        tl.leftCols(x.rank()) = atl;
        tl.rightCols(x.rank()) = x.L;
        terms.emplace_back(std::move(tl), swap_core(x.D), 1.0);
    }
    if (prob.rhs.rank() > 0) terms.emplace_back(prob.rhs, 1.0);
    if (terms.empty()) return 0.0;
    return ldl_frob_norm(ldl_concat(terms));
}

}  // namespace dre
