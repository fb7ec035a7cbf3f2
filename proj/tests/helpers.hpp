#ifndef DRE_TEST_HELPERS_HPP
#define DRE_TEST_HELPERS_HPP

#include <Eigen/Dense>
#include <random>

#include "dre/ldl.hpp"
#include "dre/problem.hpp"

namespace dre::test {

inline std::mt19937& rng() {
    static std::mt19937 gen(20260823);
    return gen;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> dist;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(rng());
    return m;
}

/// Dense stable matrix: random shifted left by slightly more than its norm.
inline Eigen::MatrixXd random_stable(Eigen::Index n) {
    Eigen::MatrixXd a = random_matrix(n, n);
    return a - (a.norm() + 1.0) * Eigen::MatrixXd::Identity(n, n);
}

inline SparseMatrix to_sparse(const Eigen::MatrixXd& a) {
    return SparseMatrix(a.sparseView());
}

/// Random PSD low-rank pair.
inline LdlPair random_psd(Eigen::Index n, Eigen::Index k) {
    Eigen::MatrixXd l = random_matrix(n, k);
    Eigen::MatrixXd d = random_matrix(k, k);
    return LdlPair(l, d * d.transpose());
}

/// Random indefinite low-rank pair.
inline LdlPair random_indef(Eigen::Index n, Eigen::Index k) {
    Eigen::MatrixXd d = random_matrix(k, k);
    return LdlPair(random_matrix(n, k), 0.5 * (d + d.transpose()));
}

/// Random stable autonomous problem with m inputs and q outputs.
inline DreProblem random_problem(Eigen::Index n, Eigen::Index m = 1,
                                 Eigen::Index q = 1, Eigen::Index x0_rank = 2) {
    DreProblem p;
    p.A.A0 = to_sparse(random_stable(n));
    p.B = random_matrix(n, m) / static_cast<double>(n);
    p.C = random_matrix(q, n) / static_cast<double>(n);
    p.X0 = x0_rank > 0 ? random_psd(n, x0_rank) : LdlPair::zero(n);
    p.t0 = 0.0;
    p.tf = 0.5;
    p.tau = 0.1;
    return p;
}

/// Scalar problem x' = 1 - x^2, x(0) = 0 (solution tanh t).
inline DreProblem tanh_problem() {
    DreProblem p;
    SparseMatrix a(1, 1);
    a.insert(0, 0) = 0.0;
    a.makeCompressed();
    p.A.A0 = a;
    p.B = Eigen::MatrixXd::Ones(1, 1);
    p.C = Eigen::MatrixXd::Ones(1, 1);
    p.X0 = LdlPair::zero(1);
    p.t0 = 0.0;
    p.tf = 0.5;
    p.tau = 0.1;
    return p;
}

inline Eigen::MatrixXd dense_riccati(const DreProblem& p, double t,
                                     const Eigen::MatrixXd& x) {
    Eigen::MatrixXd a = Eigen::MatrixXd(p.A.eval(t));
    return p.C.transpose() * p.C + a.transpose() * x + x * a -
           x * p.B * p.B.transpose() * x;
}

}  // namespace dre::test

#endif
