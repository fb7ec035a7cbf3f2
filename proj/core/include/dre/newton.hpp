#ifndef DRE_NEWTON_HPP
#define DRE_NEWTON_HPP

#include "dre/adi.hpp"
#include "dre/ldl.hpp"
#include "dre/operators.hpp"

namespace dre {

/// Stage-level algebraic Riccati equation
///   Atil^T X + X Atil - X Stil X + Wtil = 0
/// with Atil = tau_g * A - I/2 and Stil = tau_g * B B^T.
struct AreStageProblem {
    const SparseMatrix* A = nullptr;
    double tau_g = 1.0;            // tau * g_ii > 0
    Eigen::MatrixXd B;             // n x m (may have zero columns)
    LdlPair Wtil;
    LdlPair x0;                    // warm start
};

struct NewtonConfig {
    double rel_tol = 1e-10;
    int max_iter = 15;
};

struct NewtonReport {
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    int adi_iterations = 0;  // summed over all inner solves
};

/// Newton-Kleinman iteration: each iterate solves the Lyapunov equation
///   Ahat^T X + X Ahat = -Wtil - X_prev Stil X_prev,
/// Ahat = Atil - Stil X_prev kept as a sparse-plus-rank-m update.
LdlPair newton_solve(const AreStageProblem& prob, const NewtonConfig& ncfg,
                     const AdiConfig& acfg, NewtonReport* report = nullptr);

/// Frobenius norm of the ARE residual at x, evaluated in factored form.
double are_residual(const AreStageProblem& prob, const LdlPair& x);

}  // namespace dre

#endif
