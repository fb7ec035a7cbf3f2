#ifndef DRE_DENSE_ORACLE_HPP
#define DRE_DENSE_ORACLE_HPP

#include <vector>

#include "dre/coefficients.hpp"
#include "dre/problem.hpp"

namespace dre {

enum class Scheme { ImplicitPeer, RosPeer, ModRosPeer };

/// Dense stage window; for ModRosPeer the stages hold the auxiliary
/// variables and dense_reconstruct recovers the originals.
struct DenseState {
    std::vector<Eigen::MatrixXd> stages;
    double t = 0.0;
    double tau = 0.0;
};

/// Solves Ahat^T X + X Ahat = -RHS via a real Schur decomposition and
/// quasi-triangular back substitution.
Eigen::MatrixXd dense_lyap(const Eigen::MatrixXd& ahat,
                           const Eigen::MatrixXd& rhs);

/// Same equation through the n^2 x n^2 Kronecker system; independent slow
/// path, n <= 60.
Eigen::MatrixXd dense_lyap_kron(const Eigen::MatrixXd& ahat,
                                const Eigen::MatrixXd& rhs);

/// Newton-Kleinman for Atil^T X + X Atil - X Stil X + Wtil = 0.
Eigen::MatrixXd dense_are_newton(const Eigen::MatrixXd& atil,
                                 const Eigen::MatrixXd& stil,
                                 const Eigen::MatrixXd& wtil,
                                 const Eigen::MatrixXd& x0,
                                 double tol = 1e-12, int max_iter = 30);

/// Dense counterpart of startup(): identical backward-Heun discretization.
DenseState dense_startup(const DreProblem& prob, const PeerCoefficients& coeffs,
                         double tau, int substeps = 10);

/// One step of the selected scheme with the recurrences evaluated literally
/// in dense arithmetic (the Jacobian is formed explicitly).
DenseState dense_step(Scheme scheme, const DenseState& state,
                      const PeerCoefficients& coeffs, const DreProblem& prob);

/// Original stage values of a window (identity except for ModRosPeer).
std::vector<Eigen::MatrixXd> dense_reconstruct(Scheme scheme,
                                               const DenseState& state,
                                               const PeerCoefficients& coeffs);

/// Reference trajectory at the given grid times (each must be t0 + multiple
/// of tau_ref): dense two-stage second-order modified Rosenbrock-type run,
/// verified by a step-halving (Richardson) check of the endpoint.
std::vector<Eigen::MatrixXd> reference_solution(
    const DreProblem& prob, const std::vector<double>& t_grid, double tau_ref,
    double richardson_tol = 1e-9);

}  // namespace dre

#endif
