#ifndef NONLOC_ANALYSIS_HPP
#define NONLOC_ANALYSIS_HPP

#include <cstdint>
#include <utility>

#include "nonloc/solvers.hpp"

namespace nonloc {

struct analysis_error : std::runtime_error {
    explicit analysis_error(const std::string& msg) : std::runtime_error(msg) {}
};

/** Log-log least-squares fit u(r) ~ constant * r^{-exponent} on a window. */
struct DecayFit {
    double exponent = 0;
    double constant = 0;
    double stderr_ = 0;
    double r_lo = 0, r_hi = 0;
    int shells = 0;
};

/** Joint scan of the frequency curve p(mu) and the mass curve kappa(m),
 * checked against each other through the Legendre-type pairing mu*m/2. */
struct DualityReport {
    std::vector<double> mu_grid, p_curve;
    std::vector<double> m_grid, kappa_curve, mu_of_m;
    std::vector<double> duality_residuals;
    std::vector<bool> p_ok, kappa_ok;
    double m0_estimate = 0;
};

DecayFit decay_fit(const Profile& p, double r_lo, double r_hi);

/** Predicted tail exponent: min{(N-alpha)/(2-r), N+2s} for r < 2, N+2s else. */
double expected_decay(int N, double s, double alpha, double r);

/** Predicted tail prefactor (C_{N,alpha} ||u||_r^r / mu)^{1/(2-r)} in the
 * sublinear sharp range r in [lower, r*). */
double sharp_constant(const SolveReport& rep, double r);

/** Monte Carlo estimate of the annulus self-interaction
 * int int I_alpha(x-y) over A(R,h)^2, with the radial coordinate stratified.
 * Returns (estimate, standard error). */
std::pair<double, double> annuli_interaction(double R, double h, int N, double alpha,
                                             long samples, std::uint64_t seed = 0);

/** Cross term between A(R1,h1) and A(R2,h2). */
std::pair<double, double> annuli_cross(double R1, double h1, double R2, double h2,
                                       int N, double alpha, long samples,
                                       std::uint64_t seed = 0);

/** Thickness law h_R balancing the self-interaction against R. */
double annuli_thickness(double R, int N, double alpha);

/** Log-log least-squares slope of values against hs; (exponent, stderr). */
std::pair<double, double> scaling_fit(const std::vector<double>& hs,
                                      const std::vector<double>& values);

DualityReport duality_scan(const ProblemSpec& spec,
                           const std::vector<double>& mu_grid,
                           const std::vector<double>& m_grid);

}  // namespace nonloc

#endif
