// Command-line front end for the DRE peer solvers.
#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "dre/harness.hpp"
#include "dre/problems.hpp"

namespace {

struct CommonOpts {
    std::string problem = "fdm";
    int n0 = 9;
    double f1 = 20.0, f2 = 5.0, f3 = 0.0;
    bool ltv = false;
    std::vector<std::string> schemes;
    std::string coeffs;
    std::vector<double> taus;
    long steps = 0;
    double newton_tol = 1e-10;
    int newton_max = 15;
    int adi_max = 100;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool many_schemes) {
    cmd->add_option("--problem", o.problem,
                    "'fdm' for the built-in convection-diffusion problem, "
                    "or a problem directory");
    cmd->add_option("--n0", o.n0, "fdm grid points per dimension");
    cmd->add_option("--f1", o.f1, "fdm convection coefficient (xi_1)");
    cmd->add_option("--f2", o.f2, "fdm convection coefficient (xi_2)");
    cmd->add_option("--f3", o.f3, "fdm reaction coefficient");
    cmd->add_flag("--ltv", o.ltv, "wrap A as mu(t)*A0");
    auto* s = cmd->add_option("--scheme", o.schemes,
                              "implicit-{1,2}, ros-peer-{1,2}, "
                              "mod-ros-peer-{1,2}");
    if (!many_schemes) s->expected(1);
    cmd->add_option("--coeffs", o.coeffs, "coefficient file override");
    cmd->add_option("--tau", o.taus, "step size(s)");
    cmd->add_option("--steps", o.steps,
                    "override the step count (tf = t0 + steps*tau)");
    cmd->add_option("--newton-tol", o.newton_tol, "Newton tolerance");
    cmd->add_option("--newton-max", o.newton_max, "Newton iteration cap");
    cmd->add_option("--adi-max", o.adi_max, "ADI iteration cap");
    cmd->add_option("--out", o.out, "output directory");
}

dre::RunConfig make_config(const CommonOpts& o) {
    dre::RunConfig cfg;
    if (o.problem == "fdm") {
        dre::FdmSpec spec;
        spec.n0 = o.n0;
        spec.f1 = o.f1;
        spec.f2 = o.f2;
        spec.f3 = o.f3;
        cfg.problem = dre::fdm_generate(spec);
        if (o.ltv) cfg.problem = dre::make_ltv(std::move(cfg.problem));
    } else {
        cfg.problem = dre::load_problem(o.problem);
    }
    cfg.schemes = o.schemes;
    cfg.coeffs_path = o.coeffs;
    cfg.taus = o.taus;
    if (o.steps > 0) {
        const double tau = o.taus.empty() ? cfg.problem.tau : o.taus.front();
        cfg.problem.tf = cfg.problem.t0 + o.steps * tau;
    }
    cfg.newton.rel_tol = o.newton_tol;
    cfg.newton.max_iter = o.newton_max;
    cfg.adi.max_iter = o.adi_max;
    cfg.out_dir = o.out;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-rank peer integrators for differential Riccati "
                 "equations"};
    app.require_subcommand(1);

    CommonOpts solve_o, conv_o, cmp_o;
    CLI::App* solve = app.add_subcommand("solve", "integrate one trajectory");
    add_common(solve, solve_o, false);
    solve->get_option("--scheme")->required();
    CLI::App* conv =
        app.add_subcommand("convergence", "error vs step size study");
    add_common(conv, conv_o, false);
    conv->get_option("--scheme")->required();
    conv->get_option("--tau")->required();
    CLI::App* cmp = app.add_subcommand("compare", "scheme comparison table");
    add_common(cmp, cmp_o, true);
    cmp->get_option("--scheme")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    dre::RunConfig cfg;
    try {
        cfg = make_config(solve->parsed() ? solve_o
                          : conv->parsed() ? conv_o
                                           : cmp_o);
        for (const std::string& id : cfg.schemes)
            dre::resolve_scheme(id, cfg.coeffs_path);  // fail fast
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    try {
        if (solve->parsed()) {
            dre::run_solve(cfg);
        } else if (conv->parsed()) {
            dre::ConvergenceResult r = dre::run_convergence(cfg);
            std::printf("observed order: %.3f\n", r.observed_order);
        } else {
            for (const dre::CompareRow& row : dre::run_compare(cfg))
                std::printf("%s: err %.5e, %.2fs\n", row.method.c_str(),
                            row.err, row.wall_time);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
