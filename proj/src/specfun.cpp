#include "nonloc/specfun.hpp"

#include <cmath>
#include <cstdlib>

namespace nonloc {

namespace {

const double kPi = 3.14159265358979323846;

// Lanczos coefficients, g = 7, 9 terms.
const double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool near_nonpositive_int(double x, double tol = 1e-12) {
    if (x > 0.5) return false;
    return std::abs(x - std::round(x)) < tol;
}

double gamma_positive(double x) {
    // x >= 0.5 assumed
    x -= 1.0;
    double a = kLanczos[0];
    double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
    return std::sqrt(2 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

}  // namespace

double gamma_fn(double x) {
    if (near_nonpositive_int(x))
        throw specfun_error("gamma_fn: pole at x=" + std::to_string(x));
    if (x < 0.5) {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return kPi / (std::sin(kPi * x) * gamma_positive(1.0 - x));
    }
    return gamma_positive(x);
}

namespace {

// Power series sum_k (a)_k (b)_k / (c)_k w^k / k!, w in [0,1).
double hyp_series(double a, double b, double c, double w) {
    if (near_nonpositive_int(c))
        throw specfun_error("hyp2f1: c is a nonpositive integer");
    double term = 1.0, sum = 1.0;
    const long cap = 1000000;
    for (long k = 0; k < cap; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * w;
        sum += term;
        if (std::abs(term) <= 1e-16 * std::abs(sum) && k > 2) return sum;
        if (term == 0.0) return sum;  // polynomial case terminates
    }
    // a posteriori: geometric-tail bound on the dropped remainder
    double bound = std::abs(term) / (1.0 - w);
    if (bound > 1e-9 * std::abs(sum))
        throw specfun_error("hyp2f1: series cap hit, residual bound " +
                            std::to_string(bound));
    return sum;
}

}  // namespace

double hyp2f1(double a, double b, double c, double z) {
    if (z > 0)
        throw specfun_error("hyp2f1: only z <= 0 is supported");
    if (z == 0.0) return 1.0;
    // Pfaff: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; w), w = z/(z-1)
    double w = z / (z - 1.0);
    double pre = std::pow(1.0 - z, -a);
    double aa = a, bb = c - b;
    if (w > 0.99) {
        // Euler on the transformed series keeps the argument but shrinks the
        // effective parameters: 2F1(A,B;C;w) = (1-w)^{C-A-B} 2F1(C-A,C-B;C;w)
        pre *= std::pow(1.0 - w, c - aa - bb);
        double na = c - aa, nb = c - bb;
        aa = na; bb = nb;
    }
    return pre * hyp_series(aa, bb, c, w);
}

double frac_lap_constant(int N, double s) {
    if (!(s > 0.0 && s < 1.0))
        throw specfun_error("frac_lap_constant: s must be in (0,1)");
    return std::pow(4.0, s) * gamma_fn((N + 2 * s) / 2.0) /
           (std::pow(kPi, N / 2.0) * std::abs(gamma_fn(-s)));
}

double riesz_constant(int N, double alpha) {
    if (!(alpha > 0.0 && alpha < N))
        throw specfun_error("riesz_constant: alpha must be in (0,N)");
    return gamma_fn((N - alpha) / 2.0) /
           (std::pow(2.0, alpha) * std::pow(kPi, N / 2.0) * gamma_fn(alpha / 2.0));
}

double hbeta_constant(double beta, int N, double s) {
    return std::pow(2.0, 2 * s) * gamma_fn(N / 2.0 + s) * gamma_fn(beta / 2.0 + s) /
           (gamma_fn(N / 2.0) * gamma_fn(beta / 2.0));
}

double hbeta_flap_exact(double r, double beta, int N, double s) {
    if (!(beta > 0.0 && beta <= N + 2 * s))
        throw specfun_error("hbeta_flap_exact: beta out of (0, N+2s]");
    if (!(s > 0.0 && s < 1.0))
        throw specfun_error("hbeta_flap_exact: s must be in (0,1)");
    return hbeta_constant(beta, N, s) *
           hyp2f1(N / 2.0 + s, beta / 2.0 + s, N / 2.0, -r * r);
}

DecayLaw hbeta_asymptotic(double beta, int N, double s) {
    if (!(beta > 0.0 && beta <= N + 2 * s))
        throw specfun_error("hbeta_asymptotic: beta out of (0, N+2s]");
    DecayLaw law{};
    law.degenerate = false;
    auto safe_gamma = [&law](double x) {
        if (x < 0.5 && std::abs(x - std::round(x)) < 1e-12) {
            law.degenerate = true;
            return 1.0;
        }
        return gamma_fn(x);
    };
    double p2s = std::pow(2.0, 2 * s);
    if (beta > N) {
        law.rate = DecayRate::pure_power;
        law.beta = N + 2 * s;
        law.constant = p2s * safe_gamma(N / 2.0 + s) * safe_gamma(beta / 2.0 - N / 2.0) /
                       (safe_gamma(beta / 2.0) * safe_gamma(-s));
        law.sign = -1;
    } else if (beta == N) {
        law.rate = DecayRate::power_log;
        law.beta = N + 2 * s;
        law.constant = p2s * 2.0 * safe_gamma(N / 2.0 + s) /
                       (safe_gamma(N / 2.0) * safe_gamma(-s));
        law.sign = -1;
    } else if (beta == N - 2 * s) {
        law.rate = DecayRate::pure_power;
        law.beta = N + 2 * s;
        law.constant = p2s * safe_gamma(N / 2.0 + s) / safe_gamma(N / 2.0 - s);
        law.sign = +1;
    } else {
        // beta in (N-2s, N) -> negative constant; beta in (0, N-2s) -> positive
        law.rate = DecayRate::pure_power;
        law.beta = beta + 2 * s;
        law.constant = p2s * safe_gamma(beta / 2.0 + s) * safe_gamma(N / 2.0 - beta / 2.0) /
                       (safe_gamma(beta / 2.0) * safe_gamma(N / 2.0 - beta / 2.0 - s));
        law.sign = (beta > N - 2 * s) ? -1 : +1;
    }
    return law;
}

ExponentTable critical_exponents(int N, double s, double alpha) {
    if (!(N >= 1 && s > 0.0 && s <= 1.0 && alpha > 0.0 && alpha < N && N > 2 * s))
        throw specfun_error("critical_exponents: inadmissible (N,s,alpha)");
    ExponentTable t{};
    t.lower = (N + alpha) / N;
    t.l2crit = (N + alpha + 2 * s) / N;
    t.upper = (N + alpha) / (N - 2 * s);
    t.sobolev = 2.0 * N / (N - 2 * s);
    t.sublinear_threshold = (N + alpha + 4 * s) / (N + 2 * s);
    return t;
}

}  // namespace nonloc
