#include "dre/ldl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dre {

LdlPair::LdlPair(Eigen::MatrixXd L_, Eigen::MatrixXd D_)
    : L(std::move(L_)), D(std::move(D_)) {
    if (D.rows() != D.cols())
        throw std::invalid_argument("LdlPair: core must be square");
    if (L.cols() != D.rows())
        throw std::invalid_argument("LdlPair: factor/core size mismatch");
    D = 0.5 * (D + D.transpose()).eval();
}

Eigen::MatrixXd SwapCore::to_matrix() const {
    return swap_core(Eigen::MatrixXd::Identity(p, p));
}

Eigen::MatrixXd swap_core(const Eigen::MatrixXd& d) {
    const Eigen::Index p = d.rows();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * p, 2 * p);
    h.topRightCorner(p, p) = d;
    h.bottomLeftCorner(p, p) = d.transpose();
    return h;
}

LdlPair ldl_concat(const std::vector<LdlTerm>& parts) {
    if (parts.empty()) throw std::invalid_argument("ldl_concat: empty part list");
    const Eigen::Index n = parts.front().L.rows();
    Eigen::Index k = 0;
    for (const auto& p : parts) {
        if (p.L.rows() != n)
            throw std::invalid_argument("ldl_concat: row-count mismatch");
        if (p.D.rows() != p.D.cols() || p.L.cols() != p.D.rows())
            throw std::invalid_argument("ldl_concat: core size mismatch");
        if (p.matrix_weight && p.matrix_weight->cols() != p.D.rows())
            throw std::invalid_argument("ldl_concat: weight dimension mismatch");
        k += p.L.cols();
    }
    Eigen::MatrixXd L(n, k);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(k, k);
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        const Eigen::Index kp = p.L.cols();
        L.middleCols(at, kp) = p.L;
        if (p.matrix_weight) {
            const Eigen::MatrixXd& w = *p.matrix_weight;
            D.block(at, at, kp, kp) = w * p.D * w.transpose();
        } else {
            D.block(at, at, kp, kp) = p.weight * p.D;
        }
        at += kp;
    }
    return LdlPair(std::move(L), std::move(D));
}

LdlPair column_compress(const LdlPair& x, double rel_tol) {
    if (rel_tol < 0) throw std::invalid_argument("column_compress: negative tolerance");
    const Eigen::Index n = x.rows(), k = x.rank();
    if (k == 0) return x;

    // Thin column-pivoted QR of L, then eigendecomposition of the projected
    // core T D T^T with T = R P^T.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x.L);
    const Eigen::Index r0 = std::min(n, k);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r0);
    Eigen::MatrixXd t = qr.matrixR()
                            .topLeftCorner(r0, k)
                            .template triangularView<Eigen::Upper>();
    t = t * qr.colsPermutation().transpose();

    Eigen::MatrixXd core = t * x.D * t.transpose();
    core = 0.5 * (core + core.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(core);
    const Eigen::VectorXd& ev = es.eigenvalues();

    // Drop the smallest eigenvalues while the cumulative dropped Frobenius
    // mass stays within rel_tol of the total.
    std::vector<Eigen::Index> order(static_cast<size_t>(r0));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::abs(ev[a]) < std::abs(ev[b]);
    });
    double total_sq = ev.squaredNorm();
    double budget_sq = rel_tol * rel_tol * total_sq;
    double dropped_sq = 0.0;
    size_t ndrop = 0;
    for (; ndrop < order.size(); ++ndrop) {
        double next = dropped_sq + ev[order[ndrop]] * ev[order[ndrop]];
        if (next > budget_sq && ev[order[ndrop]] != 0.0) break;
        dropped_sq = next;
    }
    const Eigen::Index kept = r0 - static_cast<Eigen::Index>(ndrop);
    Eigen::MatrixXd lnew(n, kept);
    Eigen::VectorXd dnew(kept);
    Eigen::Index at = 0;
    for (size_t i = ndrop; i < order.size(); ++i, ++at) {
        lnew.col(at) = q * es.eigenvectors().col(order[i]);
        dnew[at] = ev[order[i]];
    }
    return LdlPair(std::move(lnew), Eigen::MatrixXd(dnew.asDiagonal()));
}

double ldl_frob_norm(const LdlPair& x) {
    if (x.rank() == 0) return 0.0;
    // QR of L: || L D L^T ||_F == || R D R^T ||_F.  Evaluating the small
    // core directly avoids the trace cancellation of the Gram formula.
    const Eigen::Index r = std::min(x.L.rows(), x.L.cols());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(x.L);
    Eigen::MatrixXd rr = qr.matrixQR()
                             .topRows(r)
                             .triangularView<Eigen::Upper>();
    return (rr * x.D * rr.transpose()).norm();
}

double ldl_diff_norm(const LdlPair& x, const LdlPair& y) {
    if (x.rows() != y.rows())
        throw std::invalid_argument("ldl_diff_norm: row-count mismatch");
    if (y.rank() == 0) return ldl_frob_norm(x);
    if (x.rank() == 0) return ldl_frob_norm(y);
    return ldl_frob_norm(ldl_concat({LdlTerm(x, 1.0), LdlTerm(y, -1.0)}));
}

Eigen::MatrixXd ldl_to_dense(const LdlPair& x, Eigen::Index dense_cap) {
    if (x.rows() > dense_cap)
        throw std::runtime_error("ldl_to_dense: dimension exceeds dense cap");
    if (x.rank() == 0) return Eigen::MatrixXd::Zero(x.rows(), x.rows());
    return x.L * x.D * x.L.transpose();
}

LdlPair ldl_from_dense(const Eigen::MatrixXd& x, double rel_tol) {
    if (x.rows() != x.cols())
        throw std::invalid_argument("ldl_from_dense: matrix not square");
    Eigen::MatrixXd sym = 0.5 * (x + x.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const Eigen::VectorXd& ev = es.eigenvalues();
    double vmax = ev.cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev[i]) > rel_tol * vmax) keep.push_back(i);
    Eigen::MatrixXd l(x.rows(), static_cast<Eigen::Index>(keep.size()));
    Eigen::VectorXd d(static_cast<Eigen::Index>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i) {
        l.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);
        d[static_cast<Eigen::Index>(i)] = ev[keep[i]];
    }
    return LdlPair(std::move(l), Eigen::MatrixXd(d.asDiagonal()));
}

double default_compress_tol(Eigen::Index n) {
    return static_cast<double>(n) * std::numeric_limits<double>::epsilon();
}

}  // namespace dre
