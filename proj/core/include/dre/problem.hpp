#ifndef DRE_PROBLEM_HPP
#define DRE_PROBLEM_HPP

#include <vector>

#include "dre/ldl.hpp"
#include "dre/operators.hpp"

namespace dre {

/// Differential Riccati equation X' = A(t)^T X + X A(t) - X B B^T X + C^T C
/// on [t0, tf] with initial value X(t0) = X0.
struct DreProblem {
    TimeVaryingOperator A;
    Eigen::MatrixXd B;  // n x m
    Eigen::MatrixXd C;  // q x n
    LdlPair X0;
    double t0 = 0.0;
    double tf = 0.5;
    double tau = 1e-2;

    Eigen::Index n() const { return B.rows(); }
    Eigen::Index m() const { return B.cols(); }
    Eigen::Index q() const { return C.rows(); }

    void validate() const;
};

/// Per-stage solver diagnostics collected by the integrators.
struct StageLog {
    int stage = 0;        // 1-based
    double time = 0.0;    // stage node time
    Eigen::Index rank = 0;
    int newton_iters = 0;  // 0 for linearly implicit schemes
    int adi_iters = 0;
    double residual = 0.0;
};

struct StepLog {
    std::vector<StageLog> stages;
};

}  // namespace dre

#endif
