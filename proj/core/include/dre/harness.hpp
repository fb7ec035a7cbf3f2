#ifndef DRE_HARNESS_HPP
#define DRE_HARNESS_HPP

#include <string>
#include <vector>

#include "dre/adi.hpp"
#include "dre/coefficients.hpp"
#include "dre/dense_oracle.hpp"
#include "dre/newton.hpp"
#include "dre/problem.hpp"

namespace dre {

/// Scheme selection plus its coefficient set.  Known ids: implicit-1,
/// implicit-2, ros-peer-1, ros-peer-2, mod-ros-peer-1, mod-ros-peer-2;
/// a coefficient file overrides the built-in set.
struct SchemeSpec {
    Scheme kind = Scheme::ImplicitPeer;
    PeerCoefficients coeffs;
};

SchemeSpec resolve_scheme(const std::string& id,
                          const std::string& coeffs_path = "");

struct RunConfig {
    DreProblem problem;
    std::vector<std::string> schemes;
    std::string coeffs_path;
    std::vector<double> taus;  // empty -> problem.tau
    NewtonConfig newton;
    AdiConfig adi;
    std::string out_dir;  // empty -> no files written
    int startup_substeps = 10;
};

struct TrajectoryResult {
    LdlPair endpoint;
    std::vector<StepLog> steps;
    double wall_time = 0.0;
    Eigen::Index max_rank = 0;
};

struct ConvergenceRow {
    double tau = 0.0;
    long steps = 0;
    double err = 0.0;
    double wall_time = 0.0;
    Eigen::Index max_rank = 0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double observed_order = 0.0;  // log-log slope over the finest three taus
};

struct CompareRow {
    std::string method;
    double wall_time = 0.0;
    double err = 0.0;
};

/// Integrates one trajectory over [t0, tf] with the given step size.
TrajectoryResult run_trajectory(const DreProblem& prob,
                                const SchemeSpec& scheme, double tau,
                                const NewtonConfig& ncfg,
                                const AdiConfig& acfg, int startup_substeps = 10);

/// Single solve; writes trajectory.csv and the endpoint factors when an
/// output directory is set.
TrajectoryResult run_solve(const RunConfig& cfg);

/// Convergence study over the tau list against the dense reference
/// (tau_ref = min tau / 32); taus run concurrently.
ConvergenceResult run_convergence(const RunConfig& cfg);

/// One row per scheme at the first tau in the list.
std::vector<CompareRow> run_compare(const RunConfig& cfg);

}  // namespace dre

#endif
