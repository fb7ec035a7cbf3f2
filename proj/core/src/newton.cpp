#include "dre/newton.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dre {

namespace {

// X B for X in factored form, without forming X.
Eigen::MatrixXd ldl_times(const LdlPair& x, const Eigen::MatrixXd& b) {
    if (x.rank() == 0 || b.cols() == 0)
        return Eigen::MatrixXd::Zero(x.rows(), b.cols());
    return x.L * (x.D * (x.L.transpose() * b));
}

}  // namespace

double are_residual(const AreStageProblem& prob, const LdlPair& x) {
    ShiftedOperator atil(*prob.A, prob.tau_g, -0.5);
    std::vector<LdlTerm> terms;
    if (x.rank() > 0) {
        Eigen::MatrixXd tl(x.rows(), 2 * x.rank());
        tl.leftCols(x.rank()) = atil.apply(x.L);
        tl.rightCols(x.rank()) = x.L;
        terms.emplace_back(std::move(tl), swap_core(x.D), 1.0);
        Eigen::MatrixXd xb = ldl_times(x, prob.B);
        if (xb.cols() > 0)
            terms.emplace_back(
                std::move(xb),
                Eigen::MatrixXd::Identity(prob.B.cols(), prob.B.cols()),
                -prob.tau_g);
    }
    if (prob.Wtil.rank() > 0) terms.emplace_back(prob.Wtil, 1.0);
    if (terms.empty()) return 0.0;
    return ldl_frob_norm(ldl_concat(terms));
}

LdlPair newton_solve(const AreStageProblem& prob, const NewtonConfig& ncfg,
                     const AdiConfig& acfg, NewtonReport* report) {
    if (prob.A == nullptr)
        throw std::invalid_argument("newton_solve: missing operator");
    if (prob.tau_g <= 0)
        throw std::invalid_argument("newton_solve: tau_g must be positive");
    const Eigen::Index n = prob.A->rows();
    const Eigen::Index m = prob.B.cols();
    const double wnorm = ldl_frob_norm(prob.Wtil);
    const double scale = wnorm > 0 ? wnorm : 1.0;

    NewtonReport rep;
    LdlPair x = prob.x0.rows() == n ? prob.x0 : LdlPair::zero(n);
    double prev_res = std::numeric_limits<double>::infinity();
    int increases = 0;
    for (int it = 1; it <= ncfg.max_iter; ++it) {
        Eigen::MatrixXd xb = ldl_times(x, prob.B);
        ShiftedOperator ahat(*prob.A, prob.tau_g, -0.5, prob.tau_g * prob.B,
                             xb);

        std::vector<LdlTerm> rhs_terms;
        if (prob.Wtil.rank() > 0) rhs_terms.emplace_back(prob.Wtil, 1.0);
        if (m > 0 && x.rank() > 0)
            rhs_terms.emplace_back(xb, Eigen::MatrixXd::Identity(m, m),
                                   prob.tau_g);
        AleProblem ale{&ahat, rhs_terms.empty()
                                  ? LdlPair::zero(n)
                                  : column_compress(ldl_concat(rhs_terms),
                                                    default_compress_tol(n))};
        AdiReport arep;
        x = adi_solve(ale, acfg, &arep);
        rep.adi_iterations += arep.iterations;
        rep.iterations = it;

        rep.residual = are_residual(prob, x) / scale;
        if (!std::isfinite(rep.residual))
            throw std::runtime_error("newton_solve: non-finite residual");
        if (rep.residual <= ncfg.rel_tol) {
            rep.converged = true;
            break;
        }
        increases = rep.residual > prev_res ? increases + 1 : 0;
        if (increases >= 3)
            throw std::runtime_error(
                "newton_solve: residual increased over 3 consecutive "
                "iterations");
        prev_res = rep.residual;
    }
    if (report) *report = rep;
    return x;
}

}  // namespace dre
