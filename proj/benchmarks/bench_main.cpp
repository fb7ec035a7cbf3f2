#include <benchmark/benchmark.h>

#include "dre/adi.hpp"
#include "dre/harness.hpp"
#include "dre/peer_implicit.hpp"
#include "dre/peer_rosenbrock.hpp"
#include "dre/problems.hpp"

namespace {

using namespace dre;

DreProblem fdm_problem(int n0) {
    FdmSpec spec;
    spec.n0 = n0;
    return fdm_generate(spec);
}

void bm_adi_solve(benchmark::State& state) {
    DreProblem p = fdm_problem(static_cast<int>(state.range(0)));
    ShiftedOperator op(p.A.A0, 1.0, 0.0, {}, {});
    LdlPair rhs(p.C.transpose(), Eigen::MatrixXd::Identity(p.q(), p.q()));
    AleProblem prob{&op, rhs};
    auto shifts = compute_shifts(op, AdiConfig{}.shift_count);
    for (auto _ : state) {
        LdlPair x = adi_solve(prob, AdiConfig{}, nullptr, &shifts);
        benchmark::DoNotOptimize(x.L.data());
    }
}
BENCHMARK(bm_adi_solve)->Arg(9)->Arg(19)->Arg(29);

void bm_compute_shifts(benchmark::State& state) {
    DreProblem p = fdm_problem(static_cast<int>(state.range(0)));
    ShiftedOperator op(p.A.A0, 1.0, 0.0, {}, {});
    for (auto _ : state) {
        auto shifts = compute_shifts(op, AdiConfig{}.shift_count);
        benchmark::DoNotOptimize(shifts.data());
    }
}
BENCHMARK(bm_compute_shifts)->Arg(9)->Arg(29);

void bm_column_compress(benchmark::State& state) {
    const Eigen::Index n = 2000, k = state.range(0);
    Eigen::MatrixXd l = Eigen::MatrixXd::Random(n, k);
    Eigen::MatrixXd d = Eigen::MatrixXd::Random(k, k);
    LdlPair x(l, 0.5 * (d + d.transpose()));
    for (auto _ : state) {
        LdlPair c = column_compress(x, default_compress_tol(n));
        benchmark::DoNotOptimize(c.L.data());
    }
}
BENCHMARK(bm_column_compress)->Arg(20)->Arg(80);

void bm_step(benchmark::State& state, const char* scheme_id) {
    DreProblem p = fdm_problem(9);
    SchemeSpec spec = resolve_scheme(scheme_id, "");
    const double tau = 1.0 / 100.0;
    PeerState init = startup(p, spec.coeffs, tau);
    if (spec.kind == Scheme::ImplicitPeer) {
        for (auto _ : state) {
            PeerState next = implicit_peer_step(init, spec.coeffs, p,
                                                NewtonConfig{}, AdiConfig{});
            benchmark::DoNotOptimize(next.stages.back().L.data());
        }
    } else if (spec.kind == Scheme::RosPeer) {
        RosWindow win = ros_window(init);
        for (auto _ : state) {
            RosWindow next = standard_step(win, spec.coeffs, p, AdiConfig{});
            benchmark::DoNotOptimize(next.stages.back().L.data());
        }
    } else {
        TransformedCoefficients tc = transform(spec.coeffs);
        AuxWindow win = make_aux_window(ros_window(init), spec.coeffs);
        for (auto _ : state) {
            AuxWindow next = modified_step(win, spec.coeffs, tc, p,
                                           AdiConfig{});
            benchmark::DoNotOptimize(next.x.back().L.data());
        }
    }
}
BENCHMARK_CAPTURE(bm_step, implicit_2, "implicit-2");
BENCHMARK_CAPTURE(bm_step, ros_peer_2, "ros-peer-2");
BENCHMARK_CAPTURE(bm_step, mod_ros_peer_2, "mod-ros-peer-2");

}  // namespace

BENCHMARK_MAIN();
