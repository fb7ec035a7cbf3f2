#ifndef DRE_OPERATORS_HPP
#define DRE_OPERATORS_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <functional>
#include <map>
#include <memory>

namespace dre {

// CSR storage: row offsets, sorted column indices, values.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// A^T x for a dense block x.
Eigen::MatrixXd spmv_t(const SparseMatrix& a, const Eigen::MatrixXd& x);

/// Time-dependent operator A(t): constant, scalar-scaled mu(t) * A0, or a
/// general per-time provider.
struct TimeVaryingOperator {
    enum class Mode { Constant, ScalarScaled, General };

    SparseMatrix A0;
    Mode mode = Mode::Constant;
    std::function<double(double)> mu;             // ScalarScaled
    std::function<SparseMatrix(double)> provider; // General

    bool autonomous() const { return mode == Mode::Constant; }
    SparseMatrix eval(double t) const;
};

inline SparseMatrix eval_operator(const TimeVaryingOperator& a, double t) {
    return a.eval(t);
}

/// The sparse-plus-low-rank operator T = alpha * A + sigma * I - U V^T,
/// accessed through its transpose: apply(x) = T^T x and solve(p, b) returns
/// y with (T^T + p I) y = b.  Shifted solves factorize the sparse part and
/// correct through an r x r system; the full matrix is never formed.
/// Factorizations are cached per shift and reused across calls.
class ShiftedOperator {
  public:
    explicit ShiftedOperator(SparseMatrix a, double alpha = 1.0,
                             double sigma = 0.0,
                             Eigen::MatrixXd u = Eigen::MatrixXd(),
                             Eigen::MatrixXd v = Eigen::MatrixXd());

    Eigen::Index rows() const { return a_.rows(); }
    Eigen::Index update_rank() const { return u_.cols(); }
    const SparseMatrix& sparse_part() const { return a_; }
    double alpha() const { return alpha_; }
    double sigma() const { return sigma_; }

    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& x) const;

    Eigen::MatrixXd solve(double p, const Eigen::MatrixXd& b) const;
    Eigen::MatrixXcd solve(std::complex<double> p,
                           const Eigen::MatrixXcd& b) const;
    Eigen::MatrixXcd solve(std::complex<double> p,
                           const Eigen::MatrixXd& b) const;

  private:
    struct RealFactor;
    struct ComplexFactor;
    const RealFactor& real_factor(double p) const;
    const ComplexFactor& complex_factor(std::complex<double> p) const;

    SparseMatrix a_;
    double alpha_, sigma_;
    Eigen::MatrixXd u_, v_;

    mutable std::map<double, std::shared_ptr<RealFactor>> real_cache_;
    mutable std::map<std::pair<double, double>, std::shared_ptr<ComplexFactor>>
        complex_cache_;
};

}  // namespace dre

#endif
