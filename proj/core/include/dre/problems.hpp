#ifndef DRE_PROBLEMS_HPP
#define DRE_PROBLEMS_HPP

#include <string>

#include "dre/problem.hpp"

namespace dre {

/// Axis-aligned box in the open unit square; selects grid points by strict
/// interior membership.
struct Region {
    double lo1 = 0.0, hi1 = 0.0;
    double lo2 = 0.0, hi2 = 0.0;

    bool contains(double x1, double x2) const {
        return x1 > lo1 && x1 < hi1 && x2 > lo2 && x2 < hi2;
    }
};

/// Convection-diffusion test problem on the unit square with homogeneous
/// Dirichlet boundary:  v' = Laplacian(v) - f1 dv/dx1 - f2 dv/dx2 - f3 v,
/// discretized by centered finite differences on an n0 x n0 interior grid.
struct FdmSpec {
    int n0 = 9;
    double f1 = 20.0, f2 = 5.0, f3 = 0.0;
    Region input{0.0, 0.35, 0.0, 0.35};
    Region output{0.0, 1.0, 0.8, 1.0};

    double h() const { return 1.0 / (n0 + 1); }
};

/// Grid ordering is lexicographic with xi_1 fastest; point (i,j) sits at
/// (i*h, j*h).  B (resp. C) is the indicator of the input (resp. output)
/// region.  Throws if a region contains no grid point.
DreProblem fdm_generate(const FdmSpec& spec);

/// Wraps A as mu(t) * A0 with mu(t) = amplitude*sin(frequency*pi*t) + 1.
DreProblem make_ltv(DreProblem p, double amplitude = 0.75,
                    double frequency = 8.0);

/// Loads A.mtx (coordinate), B.mtx/C.mtx (array), optional X0_L.mtx/X0_D.mtx
/// and problem.cfg (key=value; '#' comments; keys t0, tf, tau, mu, amplitude,
/// frequency) from a directory.
DreProblem load_problem(const std::string& dir);

void save_problem(const std::string& dir, const DreProblem& p);

}  // namespace dre

#endif
