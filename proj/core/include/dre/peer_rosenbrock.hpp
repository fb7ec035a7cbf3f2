#ifndef DRE_PEER_ROSENBROCK_HPP
#define DRE_PEER_ROSENBROCK_HPP

#include <vector>

#include "dre/adi.hpp"
#include "dre/coefficients.hpp"
#include "dre/peer_implicit.hpp"
#include "dre/problem.hpp"

namespace dre {

/// Window of the standard linearly implicit scheme; same node convention as
/// PeerState (stages[j] at t + (c_j - 1)*tau).
struct RosWindow {
    std::vector<LdlPair> stages;
    double t = 0.0;
    double tau = 0.0;
};

/// Window of the auxiliary-variable scheme: y holds the transformed values,
/// x the reconstructed originals (both kept, doubling storage).
struct AuxWindow {
    std::vector<LdlPair> y;
    std::vector<LdlPair> x;
    double t = 0.0;
    double tau = 0.0;
};

RosWindow ros_window(const PeerState& state);

/// Builds the auxiliary window y_j = sum_{l<=j} G(j,l) x_l.
AuxWindow make_aux_window(const RosWindow& win, const PeerCoefficients& coeffs);

/// One step of the standard Rosenbrock-type peer scheme: s ALEs sharing the
/// operator tau*gamma*(A_k - B B^T X_k) - I/2 and one ADI shift set.
RosWindow standard_step(const RosWindow& state, const PeerCoefficients& coeffs,
                        const DreProblem& prob, const AdiConfig& acfg,
                        StepLog* log = nullptr);

/// One step of the modified (auxiliary-variable) scheme: s ALEs with operator
/// (A_k - B B^T X_k) - I/(2 tau gamma), then reconstruction of the original
/// stage values.
AuxWindow modified_step(const AuxWindow& state, const PeerCoefficients& coeffs,
                        const TransformedCoefficients& tc,
                        const DreProblem& prob, const AdiConfig& acfg,
                        StepLog* log = nullptr);

}  // namespace dre

#endif
