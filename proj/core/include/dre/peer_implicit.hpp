#ifndef DRE_PEER_IMPLICIT_HPP
#define DRE_PEER_IMPLICIT_HPP

#include <vector>

#include "dre/adi.hpp"
#include "dre/coefficients.hpp"
#include "dre/newton.hpp"
#include "dre/problem.hpp"

namespace dre {

/// Factorization R(t, X) = T M T^T of the Riccati operator
/// R = C^T C + A^T X + X A - X B B^T X for X = L D L^T:
///   T = [C^T, A^T L, L],  M = diag-block(I_q, [[0, D], [D, -D L^T B B^T L D]]).
/// The autonomous variant drops the C^T/I_q block (the constant term is
/// merged elsewhere): T = [A^T L, L].
struct RiccatiOpFactors {
    Eigen::MatrixXd T;
    Eigen::MatrixXd M;
};

RiccatiOpFactors riccati_op_factors(const SparseMatrix& a,
                                    const Eigen::MatrixXd& b,
                                    const Eigen::MatrixXd& c, const LdlPair& x,
                                    bool autonomous);

/// Window of s stage values.  stages[j] approximates X at t + (c_j - 1)*tau,
/// so the last stage sits at time t itself.  factors caches each stage's
/// Riccati-operator factorization (built with A at the stage's own node).
struct PeerState {
    std::vector<LdlPair> stages;
    std::vector<RiccatiOpFactors> factors;
    double t = 0.0;
    double tau = 0.0;
};

/// Right-hand side factor of the stage-(i) Newton ALE, block order
/// [C^T | L_{k-1,1..s} | T_{k-1,1..s} | T_{k,1..i-1} | X_prev B] with the
/// matching diagonal core.  cur holds the already-computed current-window
/// stages 1..i-1 with their factors; x_newton is the current Newton iterate.
/// The column count is asserted against the closed-form width formulas.
LdlPair assemble_implicit_rhs(const PeerState& state,
                              const PeerCoefficients& coeffs, int i,
                              const std::vector<LdlPair>& cur,
                              const std::vector<RiccatiOpFactors>& cur_factors,
                              const LdlPair& x_newton, const DreProblem& prob);

/// One implicit peer step: solves the s stage AREs sequentially via
/// newton_solve and advances the window by tau.
PeerState implicit_peer_step(const PeerState& state,
                             const PeerCoefficients& coeffs,
                             const DreProblem& prob, const NewtonConfig& ncfg,
                             const AdiConfig& acfg, StepLog* log = nullptr);

/// Initial window: the last stage is X0 at t0 exactly; earlier stages are
/// integrated backward from X0 to t0 + (c_j - 1)*tau with an explicit
/// second-order (Heun) low-rank scheme in substeps sub-steps.
PeerState startup(const DreProblem& prob, const PeerCoefficients& coeffs,
                  double tau, int substeps = 10);

}  // namespace dre

#endif
