#include "dre/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <stdexcept>

#include "dre/matrix_market.hpp"
#include "dre/peer_implicit.hpp"
#include "dre/peer_rosenbrock.hpp"

namespace dre {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch())
        .count();
}

long step_count(const DreProblem& p, double tau) {
    const long steps = std::lround((p.tf - p.t0) / tau);
    if (steps < 1 || std::abs(p.t0 + steps * tau - p.tf) > 1e-8 * (p.tf - p.t0))
        throw std::invalid_argument("tau must divide the time interval");
    return steps;
}

Eigen::MatrixXd reference_endpoint(const DreProblem& prob, double min_tau) {
    // refine until the step-halving check clears its tolerance
    double tau_ref = min_tau / 32.0;
    for (int attempt = 0;; ++attempt) {
        try {
            return reference_solution(prob, {prob.tf}, tau_ref).back();
        } catch (const std::runtime_error&) {
            if (attempt >= 6) throw;
            tau_ref /= 2.0;
        }
    }
}

}  // namespace

SchemeSpec resolve_scheme(const std::string& id,
                          const std::string& coeffs_path) {
    SchemeSpec spec;
    std::string builtin;
    if (id == "implicit-1" || id == "implicit-2") {
        spec.kind = Scheme::ImplicitPeer;
        builtin = id;
    } else if (id == "ros-peer-1" || id == "ros-peer-2") {
        spec.kind = Scheme::RosPeer;
        builtin = id == "ros-peer-1" ? "rosenbrock-1" : "rosenbrock-2";
    } else if (id == "mod-ros-peer-1" || id == "mod-ros-peer-2") {
        spec.kind = Scheme::ModRosPeer;
        builtin = id == "mod-ros-peer-1" ? "rosenbrock-1" : "rosenbrock-2";
    } else {
        throw std::invalid_argument("unknown scheme id: " + id);
    }
    spec.coeffs = coeffs_path.empty() ? builtin_coefficients(builtin)
                                      : load_coefficients(coeffs_path);
    if (spec.kind == Scheme::ImplicitPeer &&
        spec.coeffs.kind != PeerCoefficients::Kind::Implicit)
        throw std::invalid_argument("scheme " + id +
                                    " needs implicit coefficients");
    if (spec.kind != Scheme::ImplicitPeer &&
        spec.coeffs.kind != PeerCoefficients::Kind::Rosenbrock)
        throw std::invalid_argument("scheme " + id +
                                    " needs Rosenbrock-type coefficients");
    return spec;
}

TrajectoryResult run_trajectory(const DreProblem& prob,
                                const SchemeSpec& scheme, double tau,
                                const NewtonConfig& ncfg,
                                const AdiConfig& acfg, int startup_substeps) {
    const long steps = step_count(prob, tau);
    TrajectoryResult result;
    const double t_start = now_seconds();

    auto note = [&](const StepLog& log) {
        for (const StageLog& st : log.stages)
            result.max_rank = std::max(result.max_rank, st.rank);
        result.steps.push_back(log);
    };

    PeerState init = startup(prob, scheme.coeffs, tau, startup_substeps);
    if (scheme.kind == Scheme::ImplicitPeer) {
        PeerState state = init;
        for (long k = 0; k < steps; ++k) {
            StepLog log;
            state = implicit_peer_step(state, scheme.coeffs, prob, ncfg, acfg,
                                       &log);
            note(log);
        }
        result.endpoint = state.stages.back();
    } else if (scheme.kind == Scheme::RosPeer) {
        RosWindow state = ros_window(init);
        for (long k = 0; k < steps; ++k) {
            StepLog log;
            state = standard_step(state, scheme.coeffs, prob, acfg, &log);
            note(log);
        }
        result.endpoint = state.stages.back();
    } else {
        TransformedCoefficients tc = transform(scheme.coeffs);
        AuxWindow state = make_aux_window(ros_window(init), scheme.coeffs);
        for (long k = 0; k < steps; ++k) {
            StepLog log;
            state = modified_step(state, scheme.coeffs, tc, prob, acfg, &log);
            note(log);
        }
        result.endpoint = state.x.back();
    }
    result.wall_time = now_seconds() - t_start;
    return result;
}

TrajectoryResult run_solve(const RunConfig& cfg) {
    if (cfg.schemes.size() != 1)
        throw std::invalid_argument("solve expects exactly one scheme");
    const double tau = cfg.taus.empty() ? cfg.problem.tau : cfg.taus.front();
    SchemeSpec spec = resolve_scheme(cfg.schemes.front(), cfg.coeffs_path);
    TrajectoryResult result = run_trajectory(cfg.problem, spec, tau,
                                             cfg.newton, cfg.adi,
                                             cfg.startup_substeps);
    if (!cfg.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        std::ofstream csv(fs::path(cfg.out_dir) / "trajectory.csv");
        csv << "step,time,stage,rank,newton_iters,adi_iters,residual\n";
        for (size_t k = 0; k < result.steps.size(); ++k)
            for (const StageLog& st : result.steps[k].stages)
                csv << k + 1 << "," << sci(st.time) << "," << st.stage << ","
                    << st.rank << "," << st.newton_iters << ","
                    << st.adi_iters << "," << sci(st.residual) << "\n";
        if (result.endpoint.rank() > 0) {
            write_matrix_market_dense(
                (fs::path(cfg.out_dir) / "X_L.mtx").string(),
                result.endpoint.L);
            write_matrix_market_dense(
                (fs::path(cfg.out_dir) / "X_D.mtx").string(),
                result.endpoint.D);
        }
    }
    return result;
}

ConvergenceResult run_convergence(const RunConfig& cfg) {
    if (cfg.schemes.size() != 1)
        throw std::invalid_argument("convergence expects exactly one scheme");
    if (cfg.taus.empty())
        throw std::invalid_argument("convergence expects a tau list");
    SchemeSpec spec = resolve_scheme(cfg.schemes.front(), cfg.coeffs_path);

    std::vector<double> taus = cfg.taus;
    std::sort(taus.begin(), taus.end(), std::greater<>());
    const double min_tau = taus.back();
    Eigen::MatrixXd ref = reference_endpoint(cfg.problem, min_tau);
    const double ref_norm = ref.norm() > 0 ? ref.norm() : 1.0;

    std::vector<std::future<ConvergenceRow>> jobs;
    for (double tau : taus)
        jobs.push_back(std::async(std::launch::async, [&, tau] {
            TrajectoryResult r =
                run_trajectory(cfg.problem, spec, tau, cfg.newton, cfg.adi,
                               cfg.startup_substeps);
            ConvergenceRow row;
            row.tau = tau;
            row.steps = std::lround((cfg.problem.tf - cfg.problem.t0) / tau);
            row.err = (ldl_to_dense(r.endpoint) - ref).norm() / ref_norm;
            row.wall_time = r.wall_time;
            row.max_rank = r.max_rank;
            return row;
        }));
    ConvergenceResult result;
    for (auto& job : jobs) result.rows.push_back(job.get());

    // least-squares log-log slope over the finest three step sizes
    const size_t fit = std::min<size_t>(3, result.rows.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = result.rows.size() - fit; k < result.rows.size(); ++k) {
        const double x = std::log(result.rows[k].tau);
        const double y = std::log(result.rows[k].err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = fit * sxx - sx * sx;
    result.observed_order = denom != 0 ? (fit * sxy - sx * sy) / denom : 0.0;

    if (!cfg.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        std::ofstream csv(fs::path(cfg.out_dir) / "convergence.csv");
        csv << "tau,steps,rel_frob_err_endpoint,wall_time,max_rank\n";
        for (const ConvergenceRow& row : result.rows)
            csv << sci(row.tau) << "," << row.steps << "," << sci(row.err)
                << "," << sci(row.wall_time) << "," << row.max_rank << "\n";
        std::ofstream order(fs::path(cfg.out_dir) / "observed_order.txt");
        order << sci(result.observed_order) << "\n";
    }
    return result;
}

std::vector<CompareRow> run_compare(const RunConfig& cfg) {
    if (cfg.schemes.empty())
        throw std::invalid_argument("compare expects at least one scheme");
    const double tau = cfg.taus.empty() ? cfg.problem.tau : cfg.taus.front();
    Eigen::MatrixXd ref = reference_endpoint(cfg.problem, tau);
    const double ref_norm = ref.norm() > 0 ? ref.norm() : 1.0;

    std::vector<CompareRow> rows;
    for (const std::string& id : cfg.schemes) {
        SchemeSpec spec = resolve_scheme(id, cfg.coeffs_path);
        TrajectoryResult r = run_trajectory(cfg.problem, spec, tau, cfg.newton,
                                            cfg.adi, cfg.startup_substeps);
        rows.push_back(
            {id, r.wall_time,
             (ldl_to_dense(r.endpoint) - ref).norm() / ref_norm});
    }
    if (!cfg.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        std::ofstream csv(fs::path(cfg.out_dir) / "compare.csv");
        csv << "method,time,rel_frob_err\n";
        for (const CompareRow& row : rows)
            csv << row.method << "," << sci(row.wall_time) << ","
                << sci(row.err) << "\n";
    }
    return rows;
}

}  // namespace dre
