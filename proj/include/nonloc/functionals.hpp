#ifndef NONLOC_FUNCTIONALS_HPP
#define NONLOC_FUNCTIONALS_HPP

#include "nonloc/core.hpp"
#include "nonloc/nonlocal_ops.hpp"

namespace nonloc {

/** Energies of a field: kinetic T, mass M, interaction D (choquard) or
 * Gloc (local), action L and Pohozaev value P. */
struct EnergyBreakdown {
    double T = 0;
    double M = 0;
    double D = 0;      // choquard interaction
    double Gloc = 0;   // local-source integral of G
    double L = 0;
    double P = 0;
    double mu = 0;
    /** Scale used for relative Pohozaev residuals: sum of the absolute
     * values of the three contributions. */
    double P_scale = 0;
};

/** Coefficients (A, B, C) and exponents of g_u(t) = A t^{a} + B t^{b} - C t^{c}. */
struct FiberCurve {
    double A = 0, B = 0, C = 0;
    double ea = 0, eb = 0, ec = 0;
};

/** Coupling density entering the Choquard interaction. For the homogeneous
 * power catalog entry this is W(t) = |t|^r / sqrt(r), which makes
 * D(u) = (1/r) int (I_alpha * |u|^r) |u|^r and keeps the Euler-Lagrange
 * right-hand side (I_alpha * |u|^r) |u|^{r-2} u free of spurious 1/r
 * factors; for all other kinds W = F. */
double choquard_coupling(const Nonlinearity& nl, double t);
/** Derivative W'(t) of the coupling density. */
double choquard_coupling_deriv(const Nonlinearity& nl, double t);

/** The Euler-Lagrange source term: (I_alpha * W(u)) W'(u) in choquard mode,
 * f(u) in local mode. */
Field source_term(const Field& u, const ProblemSpec& spec);

EnergyBreakdown energy_breakdown(const Field& u, const ProblemSpec& spec);

FiberCurve fiber_curve(const EnergyBreakdown& eb, const ProblemSpec& spec);

double fiber_value(const FiberCurve& fc, double t);

/** Unique maximizer t* of g_u on (0, inf); requires C > 0. */
double fiber_maximizer(const FiberCurve& fc);

/** u(./t) by separable cubic interpolation, zero beyond the half-box. */
Field rescale_field(const Field& u, double t);

/** Weak-form multiplier (int source(u) u - T) / M. */
double lagrange_multiplier(const Field& u, const ProblemSpec& spec);

/** |P| / P_scale. */
double pohozaev_relative(const EnergyBreakdown& eb);

}  // namespace nonloc

#endif
