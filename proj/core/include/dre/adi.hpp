#ifndef DRE_ADI_HPP
#define DRE_ADI_HPP

#include <complex>
#include <vector>

#include "dre/ldl.hpp"
#include "dre/operators.hpp"

namespace dre {

/// Algebraic Lyapunov equation op^T X + X op = -G S G^T, where the operator
/// is represented by a ShiftedOperator (apply gives the transposed action)
/// and the right-hand side by an LdlPair (G, S).
struct AleProblem {
    const ShiftedOperator* op = nullptr;
    LdlPair rhs;
};

struct AdiConfig {
    double rel_tol = 0.0;   // <= 0 selects n * eps
    int max_iter = 100;
    int shift_count = 25;
    int krylov_plus = 20;   // Arnoldi steps on the operator
    int krylov_minus = 10;  // Arnoldi steps on its inverse
    int compress_every = 10;
    double compress_tol = -1.0;  // < 0 selects n * eps
};

struct AdiReport {
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Penzl-style heuristic shift set from a two-sided Arnoldi sweep with the
/// all-ones start vector.  All shifts have negative real part; complex
/// shifts appear with positive imaginary part and stand for a conjugate
/// pair.  Falls back to a single real Gershgorin-based shift on breakdown.
std::vector<std::complex<double>> compute_shifts(const ShiftedOperator& op,
                                                 int count);

/// Low-rank LDL^T ADI iteration.  Conjugate shift pairs are executed as one
/// real double step, so the returned factors are real.
LdlPair adi_solve(const AleProblem& prob, const AdiConfig& cfg,
                  AdiReport* report = nullptr,
                  const std::vector<std::complex<double>>* shifts = nullptr);

/// Frobenius norm of op^T X + X op + G S G^T evaluated in factored form.
double ale_residual(const AleProblem& prob, const LdlPair& x);

}  // namespace dre

#endif
