#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "nonloc/specfun.hpp"

using namespace nonloc;

// Reference values frozen from an independent 50-digit evaluation.

TEST_CASE("gamma_fn: classical values") {
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-12));
    CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(gamma_fn(2.5) == doctest::Approx(1.3293403881791370204).epsilon(1e-12));
    CHECK(gamma_fn(-1.5) == doctest::Approx(2.3632718012073547031).epsilon(1e-12));
    CHECK(gamma_fn(7.3) == doctest::Approx(1271.4236336639092731).epsilon(1e-12));
}

TEST_CASE("gamma_fn: poles rejected, recurrence holds") {
    CHECK_THROWS_AS(gamma_fn(0.0), specfun_error);
    CHECK_THROWS_AS(gamma_fn(-3.0), specfun_error);
    for (double x = -5.0 + 0.0625; x < 10.0; x += 0.125) {
        if (x <= 0.0 && std::abs(x - std::round(x)) < 1e-9) continue;
        CHECK(gamma_fn(x + 1.0) == doctest::Approx(x * gamma_fn(x)).epsilon(1e-11));
    }
}

TEST_CASE("hyp2f1: closed-form identities") {
    CHECK(hyp2f1(0.0, 1.3, 2.1, -7.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hyp2f1(1.0, 2.0, 2.0, -1.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(hyp2f1(-1.0, 3.0, 2.0, -2.0) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("hyp2f1: frozen high-precision values") {
    CHECK(hyp2f1(0.3, 1.7, 2.2, -3.5) ==
          doctest::Approx(0.68403724287678737113).epsilon(1e-9));
    CHECK(hyp2f1(1.25, 0.75, 1.5, -40.0) ==
          doctest::Approx(0.081173738975781767648).epsilon(1e-9));
    CHECK(hyp2f1(2.0, 1.0, 3.0, -0.5) ==
          doctest::Approx(0.75627913513468494418).epsilon(1e-9));
}

TEST_CASE("hyp2f1: argument symmetry in (a, b)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.1, 3.0), Z(-50.0, 0.0);
    for (int k = 0; k < 25; ++k) {
        double a = U(rng), b = U(rng), c = U(rng) + 0.5, z = Z(rng);
        CHECK(hyp2f1(a, b, c, z) == doctest::Approx(hyp2f1(b, a, c, z)).epsilon(1e-10));
    }
}

TEST_CASE("frac_lap_constant: frozen values") {
    CHECK(frac_lap_constant(1, 0.5) == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
    CHECK(frac_lap_constant(2, 0.5) == doctest::Approx(0.15915494309189533577).epsilon(1e-12));
    CHECK(frac_lap_constant(3, 0.5) == doctest::Approx(0.10132118364233777144).epsilon(1e-12));
    CHECK(frac_lap_constant(3, 0.75) == doctest::Approx(0.11905056737670181835).epsilon(1e-12));
    CHECK(frac_lap_constant(2, 0.25) == doctest::Approx(0.083241983875425065489).epsilon(1e-12));
    CHECK(frac_lap_constant(3, 0.1) > 0.0);
    CHECK(frac_lap_constant(3, 0.9) > 0.0);
    CHECK_THROWS_AS(frac_lap_constant(3, 0.0), specfun_error);
    CHECK_THROWS_AS(frac_lap_constant(3, 1.0), specfun_error);
}

TEST_CASE("riesz_constant: frozen values") {
    CHECK(riesz_constant(3, 2.0) == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-12));
    CHECK(riesz_constant(2, 1.0) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-12));
    CHECK(riesz_constant(2, 1.5) == doctest::Approx(0.33296793550170026196).epsilon(1e-12));
    CHECK(riesz_constant(2, 0.5) == doctest::Approx(0.076074279862467707967).epsilon(1e-12));
    CHECK(riesz_constant(3, 1.0) == doctest::Approx(0.050660591821168885722).epsilon(1e-12));
    CHECK_THROWS_AS(riesz_constant(3, 0.0), specfun_error);
    CHECK_THROWS_AS(riesz_constant(3, 3.0), specfun_error);
    // alpha -> N^-: Gamma((N-alpha)/2) blows up, so the constant does NOT
    // vanish; it diverges. Record the actual limit behaviour.
    CHECK(riesz_constant(3, 2.9) > riesz_constant(3, 2.0));
    CHECK(riesz_constant(3, 2.99) > riesz_constant(3, 2.9));
}

TEST_CASE("hbeta_constant: frozen values") {
    CHECK(hbeta_constant(3.0, 3, 0.5) == doctest::Approx(2.5464790894703253723).epsilon(1e-12));
    CHECK(hbeta_constant(2.0, 2, 0.5) == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
    CHECK(hbeta_constant(1.0, 2, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hbeta_constant(2.5, 3, 0.75) == doctest::Approx(3.9894228040143267794).epsilon(1e-12));
}

TEST_CASE("hbeta_flap_exact: value at the origin is the prefactor") {
    CHECK(hbeta_flap_exact(0.0, 3.0, 3, 0.5) ==
          doctest::Approx(hbeta_constant(3.0, 3, 0.5)).epsilon(1e-12));
    CHECK(hbeta_flap_exact(0.0, 1.5, 2, 0.25) ==
          doctest::Approx(hbeta_constant(1.5, 2, 0.25)).epsilon(1e-12));
}

TEST_CASE("hbeta_flap_exact: frozen pointwise values") {
    CHECK(hbeta_flap_exact(1.0, 3.0, 3, 0.5) ==
          doctest::Approx(0.37827545164773481524).epsilon(1e-9));
    CHECK(hbeta_flap_exact(5.0, 3.0, 3, 0.5) ==
          doctest::Approx(-0.0013602223435128613653).epsilon(1e-8));
    CHECK(hbeta_flap_exact(2.0, 1.0, 2, 0.5) ==
          doctest::Approx(0.089442719099991587856).epsilon(1e-9));
    CHECK(hbeta_flap_exact(10.0, 2.5, 3, 0.75) ==
          doctest::Approx(-0.00019679287699604542654).epsilon(1e-8));
}

TEST_CASE("hbeta_flap_exact: beta = N-2s maps h to a pure power of itself") {
    // (-Delta)^s h_{N-2s} = C' h_{N+2s} with C' = 2^{2s} G(N/2+s)/G(N/2-s)
    const struct { int N; double s; } cases[] = {{2, 0.5}, {3, 0.5}, {3, 0.75}};
    for (auto [N, s] : cases) {
        double beta = N - 2 * s;
        double Cp = std::pow(2.0, 2 * s) * gamma_fn(N / 2.0 + s) / gamma_fn(N / 2.0 - s);
        for (double r = 0.0; r <= 10.0; r += 0.25) {
            double exact = hbeta_flap_exact(r, beta, N, s);
            double target = Cp * std::pow(1.0 + r * r, -(N + 2 * s) / 2.0);
            CHECK(exact == doctest::Approx(target).epsilon(1e-8));
        }
    }
}

TEST_CASE("hbeta_asymptotic: the five decay cases, constants vs 2F1 limits") {
    // N=3, s=0.5 throughout; reference limits frozen from r -> infinity
    // evaluation of C_{beta,N,s} 2F1(N/2+s, beta/2+s; N/2; -r^2).
    DecayLaw a = hbeta_asymptotic(3.5, 3, 0.5);  // beta in (N, N+2s]
    CHECK(a.rate == DecayRate::pure_power);
    CHECK(a.beta == doctest::Approx(4.0));
    CHECK(a.sign == -1);
    CHECK(a.constant == doctest::Approx(-2.2256715778).epsilon(1e-9));

    DecayLaw b = hbeta_asymptotic(3.0, 3, 0.5);  // beta = N: log case
    CHECK(b.rate == DecayRate::power_log);
    CHECK(b.beta == doctest::Approx(4.0));
    CHECK(b.sign == -1);
    CHECK(b.constant == doctest::Approx(-1.27323954474).epsilon(1e-9));

    DecayLaw c = hbeta_asymptotic(2.5, 3, 0.5);  // beta in (N-2s, N)
    CHECK(c.rate == DecayRate::pure_power);
    CHECK(c.beta == doctest::Approx(3.5));
    CHECK(c.sign == -1);
    CHECK(c.constant == doctest::Approx(-1.5).epsilon(1e-9));

    DecayLaw d = hbeta_asymptotic(2.0, 3, 0.5);  // beta = N-2s
    CHECK(d.rate == DecayRate::pure_power);
    CHECK(d.beta == doctest::Approx(4.0));
    CHECK(d.sign == +1);
    CHECK(d.constant == doctest::Approx(2.0).epsilon(1e-9));

    DecayLaw e = hbeta_asymptotic(1.0, 3, 0.5);  // beta in (0, N-2s)
    CHECK(e.rate == DecayRate::pure_power);
    CHECK(e.beta == doctest::Approx(2.0));
    CHECK(e.sign == +1);
    CHECK(e.constant == doctest::Approx(2.0 / M_PI).epsilon(1e-9));

    for (const DecayLaw* law : {&a, &b, &c, &d, &e}) CHECK_FALSE(law->degenerate);
    CHECK_THROWS_AS(hbeta_asymptotic(0.0, 3, 0.5), specfun_error);
    CHECK_THROWS_AS(hbeta_asymptotic(4.5, 3, 0.5), specfun_error);
}

TEST_CASE("hbeta_asymptotic: constant is the Cauchy limit of the exact values") {
    // beta = N+2s: value * r^{N+2s} converges toward C' = -1 at rate 1/r
    double v20 = hbeta_flap_exact(20.0, 4.0, 3, 0.5) * std::pow(20.0, 4.0);
    double v40 = hbeta_flap_exact(40.0, 4.0, 3, 0.5) * std::pow(40.0, 4.0);
    double v80 = hbeta_flap_exact(80.0, 4.0, 3, 0.5) * std::pow(80.0, 4.0);
    CHECK(std::abs(v40 - v20) / std::abs(v40) < 0.05);
    CHECK(std::abs(v80 - v40) / std::abs(v80) < 0.05);
    CHECK(hbeta_asymptotic(4.0, 3, 0.5).constant == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::abs(v80 - (-1.0)) < 0.02);
}

TEST_CASE("critical_exponents: boson-star table and limits") {
    ExponentTable t = critical_exponents(3, 0.5, 2.0);
    CHECK(t.lower == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(t.l2crit == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(t.upper == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(t.sobolev == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(t.sublinear_threshold == doctest::Approx(1.75).epsilon(1e-14));

    ExponentTable t1 = critical_exponents(3, 1.0, 2.0);
    CHECK(t1.upper == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("critical_exponents: ordering for random admissible triples") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        int N = 2 + static_cast<int>(U(rng) * 2);
        double s = 0.05 + 0.9 * U(rng) * std::min(1.0, N / 2.001);
        if (2 * s >= N) s = N / 2.0 - 0.05;
        double alpha = 0.05 + (N - 0.1) * U(rng);
        ExponentTable t = critical_exponents(N, s, alpha);
        CHECK(t.lower < t.l2crit);
        CHECK(t.l2crit < t.upper);
        CHECK(t.lower < t.sublinear_threshold);
        CHECK(t.sublinear_threshold < 2.0);
    }
}
