#include "dre/operators.hpp"

#include <Eigen/SparseLU>
#include <stdexcept>

namespace dre {

namespace {

template <typename Scalar>
using SpCol = Eigen::SparseMatrix<Scalar, Eigen::ColMajor>;

// Shifted transposed sparse part alpha * A^T + (sigma + p) I in column-major
// form, ready for SparseLU.
template <typename Scalar>
SpCol<Scalar> shifted_transpose(const SparseMatrix& a, double alpha,
                                Scalar shift) {
    SpCol<Scalar> m = (alpha * SpCol<double>(a.transpose())).template cast<Scalar>();
    SpCol<Scalar> eye(a.rows(), a.cols());
    eye.setIdentity();
    m += shift * eye;
    m.makeCompressed();
    return m;
}

}  // namespace

Eigen::MatrixXd spmv_t(const SparseMatrix& a, const Eigen::MatrixXd& x) {
    if (a.rows() != x.rows())
        throw std::invalid_argument("spmv_t: dimension mismatch");
    return a.transpose() * x;
}

SparseMatrix TimeVaryingOperator::eval(double t) const {
    switch (mode) {
        case Mode::Constant:
            return A0;
        case Mode::ScalarScaled:
            return SparseMatrix(mu(t) * A0);
        case Mode::General:
            return provider(t);
    }
    throw std::logic_error("TimeVaryingOperator: invalid mode");
}

struct ShiftedOperator::RealFactor {
    Eigen::SparseLU<SpCol<double>> lu;
    Eigen::MatrixXd z;                       // F^{-1} V
    Eigen::PartialPivLU<Eigen::MatrixXd> s;  // LU of I_r - U^T Z
};

struct ShiftedOperator::ComplexFactor {
    Eigen::SparseLU<SpCol<std::complex<double>>> lu;
    Eigen::MatrixXcd z;
    Eigen::PartialPivLU<Eigen::MatrixXcd> s;
};

ShiftedOperator::ShiftedOperator(SparseMatrix a, double alpha, double sigma,
                                 Eigen::MatrixXd u, Eigen::MatrixXd v)
    : a_(std::move(a)), alpha_(alpha), sigma_(sigma), u_(std::move(u)),
      v_(std::move(v)) {
    if (a_.rows() != a_.cols())
        throw std::invalid_argument("ShiftedOperator: sparse part not square");
    if (u_.size() == 0) u_.resize(a_.rows(), 0);
    if (v_.size() == 0) v_.resize(a_.rows(), 0);
    if (u_.rows() != a_.rows() || v_.rows() != a_.rows() ||
        u_.cols() != v_.cols())
        throw std::invalid_argument("ShiftedOperator: update factor mismatch");
}

Eigen::MatrixXd ShiftedOperator::apply(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd y = alpha_ * (a_.transpose() * x) + sigma_ * x;
    if (u_.cols() > 0) y.noalias() -= v_ * (u_.transpose() * x);
    return y;
}

Eigen::MatrixXcd ShiftedOperator::apply(const Eigen::MatrixXcd& x) const {
    Eigen::MatrixXcd y = alpha_ * (a_.transpose().cast<std::complex<double>>() * x) +
                         sigma_ * x;
    if (u_.cols() > 0)
        y.noalias() -= v_.cast<std::complex<double>>() *
                       (u_.transpose().cast<std::complex<double>>() * x);
    return y;
}

const ShiftedOperator::RealFactor& ShiftedOperator::real_factor(double p) const {
    auto it = real_cache_.find(p);
    if (it != real_cache_.end()) return *it->second;
    auto f = std::make_shared<RealFactor>();
    f->lu.compute(shifted_transpose<double>(a_, alpha_, sigma_ + p));
    if (f->lu.info() != Eigen::Success)
        throw std::runtime_error("ShiftedOperator: sparse factorization failed");
    if (u_.cols() > 0) {
        f->z = f->lu.solve(v_);
        Eigen::MatrixXd s = Eigen::MatrixXd::Identity(u_.cols(), u_.cols()) -
                            u_.transpose() * f->z;
        f->s.compute(s);
    }
    real_cache_[p] = f;
    return *f;
}

const ShiftedOperator::ComplexFactor&
ShiftedOperator::complex_factor(std::complex<double> p) const {
    auto key = std::make_pair(p.real(), p.imag());
    auto it = complex_cache_.find(key);
    if (it != complex_cache_.end()) return *it->second;
    auto f = std::make_shared<ComplexFactor>();
    f->lu.compute(shifted_transpose<std::complex<double>>(a_, alpha_, sigma_ + p));
    if (f->lu.info() != Eigen::Success)
        throw std::runtime_error("ShiftedOperator: sparse factorization failed");
    if (u_.cols() > 0) {
        f->z = f->lu.solve(v_.cast<std::complex<double>>().eval());
        Eigen::MatrixXcd s =
            Eigen::MatrixXcd::Identity(u_.cols(), u_.cols()) -
            u_.transpose().cast<std::complex<double>>() * f->z;
        f->s.compute(s);
    }
    complex_cache_[key] = f;
    return *f;
}

Eigen::MatrixXd ShiftedOperator::solve(double p, const Eigen::MatrixXd& b) const {
    if (b.rows() != a_.rows())
        throw std::invalid_argument("ShiftedOperator::solve: dimension mismatch");
    const RealFactor& f = real_factor(p);
    Eigen::MatrixXd y = f.lu.solve(b);
    if (u_.cols() > 0) y.noalias() += f.z * f.s.solve(u_.transpose() * y);
    return y;
}

Eigen::MatrixXcd ShiftedOperator::solve(std::complex<double> p,
                                        const Eigen::MatrixXcd& b) const {
    if (b.rows() != a_.rows())
        throw std::invalid_argument("ShiftedOperator::solve: dimension mismatch");
    if (p.imag() == 0.0) {
        Eigen::MatrixXcd y(b.rows(), b.cols());
        y.real() = solve(p.real(), b.real().eval());
        y.imag() = solve(p.real(), b.imag().eval());
        return y;
    }
    const ComplexFactor& f = complex_factor(p);
    Eigen::MatrixXcd y = f.lu.solve(b);
    if (u_.cols() > 0)
        y.noalias() +=
            f.z * f.s.solve(u_.transpose().cast<std::complex<double>>() * y);
    return y;
}

Eigen::MatrixXcd ShiftedOperator::solve(std::complex<double> p,
                                        const Eigen::MatrixXd& b) const {
    return solve(p, Eigen::MatrixXcd(b.cast<std::complex<double>>()));
}

}  // namespace dre
