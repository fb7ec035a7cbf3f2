#ifndef DRE_LDL_HPP
#define DRE_LDL_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace dre {

/// Symmetric matrix of low numerical rank, stored as L * D * L^T with a
/// tall factor L (n x k) and a small symmetric, possibly indefinite core
/// D (k x k).  Values are immutable after construction.
struct LdlPair {
    Eigen::MatrixXd L;  // n x k
    Eigen::MatrixXd D;  // k x k, symmetric

    LdlPair() = default;
    LdlPair(Eigen::MatrixXd L_, Eigen::MatrixXd D_);

    static LdlPair zero(Eigen::Index n) {
        return LdlPair(Eigen::MatrixXd(n, 0), Eigen::MatrixXd(0, 0));
    }

    Eigen::Index rows() const { return L.rows(); }
    Eigen::Index rank() const { return L.cols(); }
};

/// One summand of a block concatenation.  Represents L * (w D) * L^T for a
/// scalar weight w, or L * (W D W^T) * L^T when a matrix weight W is given.
struct LdlTerm {
    Eigen::MatrixXd L;
    Eigen::MatrixXd D;
    double weight = 1.0;
    std::optional<Eigen::MatrixXd> matrix_weight;

    LdlTerm(Eigen::MatrixXd L_, Eigen::MatrixXd D_, double w = 1.0)
        : L(std::move(L_)), D(std::move(D_)), weight(w) {}
    LdlTerm(Eigen::MatrixXd L_, Eigen::MatrixXd D_, Eigen::MatrixXd W)
        : L(std::move(L_)), D(std::move(D_)), matrix_weight(std::move(W)) {}
    LdlTerm(const LdlPair& x, double w = 1.0) : L(x.L), D(x.D), weight(w) {}
};

/// The 2p x 2p block matrix [[0, I_p], [I_p, 0]].
struct SwapCore {
    Eigen::Index p = 0;
    explicit SwapCore(Eigen::Index p_) : p(p_) {}
    Eigen::MatrixXd to_matrix() const;
};

/// [[0, D], [D, 0]] for a square block D.
Eigen::MatrixXd swap_core(const Eigen::MatrixXd& d);

/// Horizontal concatenation of the factors with a block-diagonal core of
/// weighted blocks; represents the sum of the weighted terms.
LdlPair ldl_concat(const std::vector<LdlTerm>& parts);

/// Rank truncation at a relative Frobenius tolerance.  The returned L has
/// orthonormal columns and the dropped part satisfies
/// ||X - X'||_F <= rel_tol * ||X||_F.
LdlPair column_compress(const LdlPair& x, double rel_tol);

/// ||L D L^T||_F from the k x k Gram matrix L^T L; never forms the n x n
/// matrix.
double ldl_frob_norm(const LdlPair& x);

/// ||X - Y||_F via the concatenated pair ([Lx, Ly], diag(Dx, -Dy)).
double ldl_diff_norm(const LdlPair& x, const LdlPair& y);

/// Dense reconstruction L D L^T (test/oracle path; guarded by a size cap).
Eigen::MatrixXd ldl_to_dense(const LdlPair& x, Eigen::Index dense_cap = 2000);

/// Exact factorization of a dense symmetric matrix by eigendecomposition,
/// discarding eigenvalues below rel_tol relative magnitude.
LdlPair ldl_from_dense(const Eigen::MatrixXd& x, double rel_tol = 0.0);

/// Default compression tolerance, machine epsilon scaled by the problem
/// dimension.
double default_compress_tol(Eigen::Index n);

}  // namespace dre

#endif
