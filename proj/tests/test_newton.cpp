#include <doctest.h>

#include <cmath>

#include "dre/dense_oracle.hpp"
#include "dre/newton.hpp"
#include "helpers.hpp"

using namespace dre;
using namespace dre::test;

namespace {

Eigen::MatrixXd dense_are_residual(const AreStageProblem& p,
                                   const Eigen::MatrixXd& x) {
    Eigen::MatrixXd atil =
        p.tau_g * Eigen::MatrixXd(*p.A) -
        0.5 * Eigen::MatrixXd::Identity(p.A->rows(), p.A->cols());
    Eigen::MatrixXd stil = p.tau_g * p.B * p.B.transpose();
    return atil.transpose() * x + x * atil - x * stil * x +
           ldl_to_dense(p.Wtil);
}

}  // namespace

TEST_SUITE("newton") {

TEST_CASE("scalar stage equation") {
    // tau_g = 1, A = -1, B = 1, W = 1: atil = -3/2, so the stage ARE reads
    // -3x - x^2 + 1 = 0 with stabilizing root x = (-3 + sqrt(13)) / 2.
    SparseMatrix a(1, 1);
    a.insert(0, 0) = -1.0;
    a.makeCompressed();
    AreStageProblem p;
    p.A = &a;
    p.tau_g = 1.0;
    p.B = Eigen::MatrixXd::Ones(1, 1);
    p.Wtil = LdlPair(Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1));
    p.x0 = LdlPair::zero(1);
    NewtonReport rep;
    LdlPair x = newton_solve(p, NewtonConfig{}, AdiConfig{}, &rep);
    CHECK(rep.converged);
    CHECK(ldl_to_dense(x)(0, 0) ==
          doctest::Approx((-3.0 + std::sqrt(13.0)) / 2.0).epsilon(1e-9));
}

TEST_CASE("zero input reduces to a single Lyapunov solve") {
    const Eigen::Index n = 12;
    SparseMatrix a = to_sparse(random_stable(n));
    AreStageProblem p;
    p.A = &a;
    p.tau_g = 0.3;
    p.B = Eigen::MatrixXd::Zero(n, 0);
    p.Wtil = random_psd(n, 2);
    p.x0 = LdlPair::zero(n);
    NewtonReport rep;
    LdlPair x = newton_solve(p, NewtonConfig{}, AdiConfig{}, &rep);
    CHECK(rep.converged);
    CHECK(rep.iterations == 1);
    Eigen::MatrixXd res = dense_are_residual(p, ldl_to_dense(x));
    CHECK(res.norm() <= 1e-7 * ldl_frob_norm(p.Wtil));
}

TEST_CASE("matches the dense Newton oracle") {
    const Eigen::Index n = 10, m = 2;
    SparseMatrix a = to_sparse(random_stable(n));
    AreStageProblem p;
    p.A = &a;
    p.tau_g = 0.25;
    p.B = random_matrix(n, m);
    p.Wtil = random_psd(n, 2);
    p.x0 = LdlPair::zero(n);
    NewtonReport rep;
    LdlPair x = newton_solve(p, NewtonConfig{}, AdiConfig{}, &rep);
    CHECK(rep.converged);
    CHECK(rep.adi_iterations > 0);

    Eigen::MatrixXd atil =
        p.tau_g * Eigen::MatrixXd(a) - 0.5 * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd stil = p.tau_g * p.B * p.B.transpose();
    Eigen::MatrixXd expect = dense_are_newton(atil, stil, ldl_to_dense(p.Wtil),
                                              Eigen::MatrixXd::Zero(n, n));
    CHECK((ldl_to_dense(x) - expect).norm() <= 1e-8 * expect.norm());
}

TEST_CASE("meets the requested tolerance on the true residual") {
    const Eigen::Index n = 16;
    SparseMatrix a = to_sparse(random_stable(n));
    AreStageProblem p;
    p.A = &a;
    p.tau_g = 0.1;
    p.B = random_matrix(n, 1);
    p.Wtil = random_psd(n, 3);
    p.x0 = LdlPair::zero(n);
    NewtonConfig ncfg;
    ncfg.rel_tol = 1e-10;
    NewtonReport rep;
    LdlPair x = newton_solve(p, ncfg, AdiConfig{}, &rep);
    CHECK(rep.converged);
    CHECK(rep.iterations <= ncfg.max_iter);
    Eigen::MatrixXd res = dense_are_residual(p, ldl_to_dense(x));
    CHECK(res.norm() <= 1e-8 * ldl_frob_norm(p.Wtil));
    CHECK(rep.residual <= ncfg.rel_tol);
}

TEST_CASE("factored residual matches dense arithmetic") {
    const Eigen::Index n = 9;
    SparseMatrix a = to_sparse(random_stable(n));
    AreStageProblem p;
    p.A = &a;
    p.tau_g = 0.4;
    p.B = random_matrix(n, 2);
    p.Wtil = random_indef(n, 2);
    p.x0 = LdlPair::zero(n);
    LdlPair x = random_indef(n, 4);
    double expect = dense_are_residual(p, ldl_to_dense(x)).norm();
    CHECK(are_residual(p, x) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("warm start accelerates convergence") {
    const Eigen::Index n = 12;
    SparseMatrix a = to_sparse(random_stable(n));
    AreStageProblem p;
    p.A = &a;
    p.tau_g = 0.2;
    p.B = random_matrix(n, 1);
    p.Wtil = random_psd(n, 2);
    p.x0 = LdlPair::zero(n);
    NewtonReport cold;
    LdlPair x = newton_solve(p, NewtonConfig{}, AdiConfig{}, &cold);
    p.x0 = x;
    NewtonReport warm;
    newton_solve(p, NewtonConfig{}, AdiConfig{}, &warm);
    CHECK(warm.iterations <= cold.iterations);
}

TEST_CASE("iteration cap is reported as non-convergence") {
    const Eigen::Index n = 8;
    SparseMatrix a = to_sparse(random_stable(n));
    AreStageProblem p;
    p.A = &a;
    p.tau_g = 0.3;
    p.B = random_matrix(n, 1);
    p.Wtil = random_psd(n, 2);
    p.x0 = LdlPair::zero(n);
    NewtonConfig ncfg;
    ncfg.rel_tol = 1e-16;  // unattainable
    ncfg.max_iter = 2;
    NewtonReport rep;
    newton_solve(p, ncfg, AdiConfig{}, &rep);
    CHECK(!rep.converged);
    CHECK(rep.iterations == 2);
}

}  // TEST_SUITE
