#include <doctest.h>

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dre/matrix_market.hpp"
#include "dre/operators.hpp"
#include "helpers.hpp"

using namespace dre;
using namespace dre::test;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE("linops") {

TEST_CASE("time-varying operator modes") {
    Eigen::MatrixXd a0 = random_matrix(4, 4);
    TimeVaryingOperator op;
    op.A0 = to_sparse(a0);

    SUBCASE("constant") {
        CHECK(op.autonomous());
        CHECK((Eigen::MatrixXd(op.eval(0.3)) - a0).norm() == 0.0);
    }
    SUBCASE("scalar scaled") {
        op.mode = TimeVaryingOperator::Mode::ScalarScaled;
        op.mu = [](double t) { return 1.0 + t; };
        CHECK(!op.autonomous());
        CHECK((Eigen::MatrixXd(op.eval(0.5)) - 1.5 * a0).norm() <= 1e-15 * a0.norm());
    }
    SUBCASE("general provider") {
        Eigen::MatrixXd a1 = random_matrix(4, 4);
        op.mode = TimeVaryingOperator::Mode::General;
        op.provider = [&](double t) {
            return to_sparse(Eigen::MatrixXd(a0 + t * a1));
        };
        CHECK(!op.autonomous());
        CHECK((Eigen::MatrixXd(op.eval(2.0)) - (a0 + 2.0 * a1)).norm() <=
              1e-14 * a0.norm());
    }
}

TEST_CASE("shifted operator apply matches dense") {
    const Eigen::Index n = 10, r = 2;
    Eigen::MatrixXd a = random_matrix(n, n);
    Eigen::MatrixXd u = random_matrix(n, r), v = random_matrix(n, r);
    ShiftedOperator op(to_sparse(a), 0.7, -0.5, u, v);
    Eigen::MatrixXd dense =
        0.7 * a.transpose() - 0.5 * Eigen::MatrixXd::Identity(n, n) -
        v * u.transpose();
    Eigen::MatrixXd x = random_matrix(n, 3);
    CHECK((op.apply(x) - dense * x).norm() <= 1e-13 * dense.norm() * x.norm());
}

TEST_CASE("shifted real solve inverts the shifted operator") {
    const Eigen::Index n = 12, r = 3;
    Eigen::MatrixXd a = random_stable(n);
    Eigen::MatrixXd u = random_matrix(n, r), v = random_matrix(n, r);
    ShiftedOperator op(to_sparse(a), 1.0, 0.0, u, v);
    for (double p : {-1.0, -4.0}) {
        Eigen::MatrixXd b = random_matrix(n, 2);
        Eigen::MatrixXd x = op.solve(p, b);
        // (A^T + pI - V U^T) x should equal b
        Eigen::MatrixXd dense = a.transpose() + p * Eigen::MatrixXd::Identity(n, n) -
                                v * u.transpose();
        CHECK((dense * x - b).norm() <= 1e-10 * b.norm());
    }
}

TEST_CASE("shifted complex solve inverts the shifted operator") {
    const Eigen::Index n = 9, r = 2;
    Eigen::MatrixXd a = random_stable(n);
    Eigen::MatrixXd u = random_matrix(n, r), v = random_matrix(n, r);
    ShiftedOperator op(to_sparse(a), 1.0, -0.25, u, v);
    std::complex<double> p(-2.0, 1.5);
    Eigen::MatrixXd b = random_matrix(n, 2);
    Eigen::MatrixXcd x = op.solve(p, b);
    Eigen::MatrixXcd dense =
        (a.transpose() - 0.25 * Eigen::MatrixXd::Identity(n, n) -
         v * u.transpose())
            .cast<std::complex<double>>();
    dense += p * Eigen::MatrixXcd::Identity(n, n);
    CHECK((dense * x - b.cast<std::complex<double>>()).norm() <= 1e-10 * b.norm());
}

TEST_CASE("complex solve with real shift falls back to the real path") {
    const Eigen::Index n = 6;
    Eigen::MatrixXd a = random_stable(n);
    ShiftedOperator op(to_sparse(a), 1.0, 0.0, {}, {});
    Eigen::MatrixXcd b = random_matrix(n, 1) +
                         std::complex<double>(0, 1) * random_matrix(n, 1);
    Eigen::MatrixXcd x = op.solve(std::complex<double>(-3.0, 0.0), b);
    Eigen::MatrixXcd dense =
        (a.transpose() - 3.0 * Eigen::MatrixXd::Identity(n, n))
            .cast<std::complex<double>>();
    CHECK((dense * x - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("solve without low-rank update") {
    const Eigen::Index n = 8;
    Eigen::MatrixXd a = random_stable(n);
    ShiftedOperator op(to_sparse(a), 2.0, 0.5, {}, {});
    Eigen::MatrixXd b = random_matrix(n, 1);
    Eigen::MatrixXd x = op.solve(-1.0, b);
    Eigen::MatrixXd dense =
        2.0 * a.transpose() + (0.5 - 1.0) * Eigen::MatrixXd::Identity(n, n);
    CHECK((dense * x - b).norm() <= 1e-11 * b.norm());
}

TEST_CASE("matrix market coordinate round trip") {
    Eigen::MatrixXd a = random_matrix(7, 5);
    a(3, 2) = 0.0;  // keep a structural zero out of the pattern
    auto path = temp_file("dre_test_coord.mtx");
    write_matrix_market_sparse(path.string(), to_sparse(a));
    SparseMatrix b = read_matrix_market_sparse(path.string());
    CHECK((Eigen::MatrixXd(b) - a).norm() <= 1e-15 * a.norm());
    std::filesystem::remove(path);
}

TEST_CASE("matrix market dense array round trip") {
    Eigen::MatrixXd a = random_matrix(6, 3);
    auto path = temp_file("dre_test_array.mtx");
    write_matrix_market_dense(path.string(), a);
    Eigen::MatrixXd b = read_matrix_market_dense(path.string());
    CHECK((b - a).norm() <= 1e-15 * a.norm());
    std::filesystem::remove(path);
}

TEST_CASE("matrix market symmetric array read") {
    // lower triangle of a 3x3 symmetric matrix, column by column
    auto path = temp_file("dre_test_sym.mtx");
    {
        std::ofstream f(path);
        f << "%%MatrixMarket matrix array real symmetric\n"
          << "% comment line\n"
          << "3 3\n"
          << "1\n2\n3\n4\n5\n6\n";
    }
    Eigen::MatrixXd a = read_matrix_market_dense(path.string());
    Eigen::MatrixXd expect(3, 3);
    expect << 1, 2, 3, 2, 4, 5, 3, 5, 6;
    CHECK((a - expect).norm() == 0.0);
    std::filesystem::remove(path);
}

TEST_CASE("matrix market rejects malformed input") {
    auto path = temp_file("dre_test_bad.mtx");
    {
        std::ofstream f(path);
        f << "not a matrix market file\n";
    }
    CHECK_THROWS(read_matrix_market_sparse(path.string()));
    CHECK_THROWS(read_matrix_market_dense("/nonexistent/file.mtx"));
    std::filesystem::remove(path);
}

}  // TEST_SUITE
