#ifndef NONLOC_SPECFUN_HPP
#define NONLOC_SPECFUN_HPP

#include <stdexcept>
#include <string>

namespace nonloc {

/** Thrown when special-function inputs hit a pole or a series fails to
 * converge within its term cap. */
struct specfun_error : std::runtime_error {
    explicit specfun_error(const std::string& msg) : std::runtime_error(msg) {}
};

/** The five critical exponents attached to a triple (N, s, alpha). */
struct ExponentTable {
    double lower;                // (N+alpha)/N
    double l2crit;               // (N+alpha+2s)/N
    double upper;                // (N+alpha)/(N-2s)
    double sobolev;              // 2N/(N-2s)
    double sublinear_threshold;  // (N+alpha+4s)/(N+2s)
};

enum class DecayRate { pure_power, power_log };

/** Asymptotic law u(r) ~ constant * r^{-beta}, optionally with a log factor. */
struct DecayLaw {
    DecayRate rate;
    double beta;
    double constant;      // the asymptotic prefactor C'
    int sign;             // +1 or -1
    bool degenerate;      // gamma-pole parameter coincidence: constant unusable
};

/** Gamma function via Lanczos (g=7, 9 coefficients), reflection for x < 0.5.
 * Throws specfun_error at nonpositive integers. */
double gamma_fn(double x);

/** Gauss 2F1(a,b;c;z) for z <= 0, via the Pfaff transform w = z/(z-1) and a
 * power series in w in [0,1); an extra Euler transform is applied when
 * w > 0.99. Series capped at 1e6 terms; nonconvergence throws. */
double hyp2f1(double a, double b, double c, double z);

/** C_{N,s} = 4^s Gamma((N+2s)/2) / (pi^{N/2} |Gamma(-s)|), 0 < s < 1. */
double frac_lap_constant(int N, double s);

/** C_{N,alpha} = Gamma((N-alpha)/2) / (2^alpha pi^{N/2} Gamma(alpha/2)). */
double riesz_constant(int N, double alpha);

/** Prefactor C_{beta,N,s} = 2^{2s} Gamma(N/2+s) Gamma(beta/2+s) /
 * (Gamma(N/2) Gamma(beta/2)). */
double hbeta_constant(double beta, int N, double s);

/** Exact pointwise value of (-Delta)^s h_beta at radius r, where
 * h_beta(x) = (1+|x|^2)^{-beta/2}:
 *   C_{beta,N,s} * 2F1(N/2+s, beta/2+s; N/2; -r^2). */
double hbeta_flap_exact(double r, double beta, int N, double s);

/** Case-split asymptotic law of (-Delta)^s h_beta as r -> infinity. */
DecayLaw hbeta_asymptotic(double beta, int N, double s);

ExponentTable critical_exponents(int N, double s, double alpha);

}  // namespace nonloc

#endif
