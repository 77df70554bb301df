#ifndef NONLOC_SOLVERS_HPP
#define NONLOC_SOLVERS_HPP

#include <functional>

#include "nonloc/functionals.hpp"

namespace nonloc {

struct solver_error : std::runtime_error {
    explicit solver_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolveReport {
    ProblemSpec problem;
    Field field;
    EnergyBreakdown breakdown;
    double mu = 0;
    double mass = 0;
    int iterations = 0;
    std::vector<double> residual_history;
    bool converged = false;
    double wallclock = 0;  // seconds; excluded from deterministic reports
    // filled by analysis when a decay study is requested
    double decay_exponent = 0;
    double decay_constant = 0;
    bool decay_filled = false;
};

/** Build the initial iterate requested by spec.solver.init. */
Field initial_field(const ProblemSpec& spec);

/** Stabilized fixed-point iteration for the homogeneous Choquard problem at
 * fixed mu:
 *   u <- gamma^theta * bessel_solve((I_alpha * u^r) u^{r-1}, s, mu),
 * gamma = <((-D)^s + mu)u, u> / <RHS(u), u>, theta = (2r-1)/(2r-2). */
SolveReport petviashvili_solve(const ProblemSpec& spec);

/** Preconditioned descent on the action at fixed mu, with a Pohozaev-fiber
 * rescale every 10 iterations; general catalog nonlinearities. */
SolveReport fiber_descent_solve(const ProblemSpec& spec);

/** Projected preconditioned gradient flow at prescribed mass m; reports the
 * extracted multiplier and the mu-free action. */
SolveReport normalized_flow_solve(const ProblemSpec& spec, double m);

/** Rescaled semiclassical problem (-D)^s u + V(eps x) u = f(u), local mode;
 * continuation from the autonomous ground state at mu = min V. */
SolveReport semiclassical_solve(const ProblemSpec& spec,
                                const std::function<double(const std::vector<double>&)>& V,
                                double eps);

/** Location (coordinates) of the maximum of a field. */
std::vector<double> argmax_location(const Field& u);

}  // namespace nonloc

#endif
