#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "nonloc/core.hpp"

using namespace nonloc;

namespace {

std::string write_temp(const std::string& text) {
    static int counter = 0;
    std::string path = "test_core_tmp_" + std::to_string(counter++) + ".ini";
    std::ofstream out(path);
    out << text;
    return path;
}

Field sample(const GridSpec& g, double (*fn)(double, double, double)) {
    Field u(g);
    std::vector<int> idx(g.N, 0);
    for (std::size_t lin = 0; lin < u.size(); ++lin) {
        double x[3] = {0, 0, 0};
        for (int d = 0; d < g.N; ++d) x[d] = (idx[d] - g.n / 2) * g.dx();
        u[lin] = fn(x[0], x[1], x[2]);
        for (int d = g.N - 1; d >= 0; --d) {
            if (++idx[d] < g.n) break;
            idx[d] = 0;
        }
    }
    return u;
}

}  // namespace

TEST_CASE("load_config: minimal boson-star file") {
    std::string path = write_temp(
        "[problem]\nN = 3\ns = 0.5\nalpha = 2\nmode = choquard\nmu = 1\n"
        "nonlinearity = power(2)\n[grid]\nn = 64\nL = 40\n");
    ProblemSpec spec = load_config(path);
    CHECK(spec.N == 3);
    CHECK(spec.s == doctest::Approx(0.5));
    CHECK(spec.alpha == doctest::Approx(2.0));
    CHECK(spec.mode == Mode::choquard);
    CHECK(spec.mu == doctest::Approx(1.0));
    CHECK(spec.nonlinearity.kind == NonlinKind::power);
    CHECK(spec.nonlinearity.r == doctest::Approx(2.0));
    CHECK(spec.grid.n == 64);
    CHECK(spec.grid.L == doctest::Approx(40.0));
    std::remove(path.c_str());
}

TEST_CASE("load_config: out-of-range s names the key") {
    std::string path = write_temp(
        "[problem]\nN = 3\ns = 1.5\nalpha = 2\nmu = 1\nnonlinearity = power(2)\n"
        "[grid]\nn = 64\nL = 40\n");
    CHECK_THROWS_WITH_AS(load_config(path), doctest::Contains("s"), config_error);
    std::remove(path.c_str());
}

TEST_CASE("load_config: solver defaults filled in") {
    std::string path = write_temp(
        "[problem]\nN = 3\ns = 0.5\nalpha = 2\nmu = 1\nnonlinearity = power(2)\n"
        "[grid]\nn = 64\nL = 40\n");
    ProblemSpec spec = load_config(path);
    CHECK(spec.solver.grad_tol == doctest::Approx(1e-8));
    CHECK(spec.solver.poho_tol == doctest::Approx(1e-6));
    CHECK(spec.solver.max_iters == 5000);
    CHECK(spec.solver.step == doctest::Approx(0.5));
    std::remove(path.c_str());
}

TEST_CASE("load_config: rejections name the offending key") {
    CHECK_THROWS_AS(parse_config_text("[problem]\nN = 3\ns = 0.5\nalpha = 4\nmu = 1\n"
                                      "nonlinearity = power(2)\n[grid]\nn = 64\nL = 40\n"),
                    config_error);  // alpha >= N
    CHECK_THROWS_WITH_AS(parse_config_text("[problem]\nN = 3\ns = 0.5\nalpha = 2\nmu = 1\n"
                                           "nonlinearity = power(2)\n[grid]\nn = 48\nL = 40\n"),
                         doctest::Contains("n"), config_error);  // not a power of two
    CHECK_THROWS_AS(parse_config_text("[problem]\nbogus = 1\n"), config_error);
}

TEST_CASE("nonlinearity_eval: catalog values") {
    Nonlinearity p2 = parse_nonlinearity("power(2)");
    auto [f, F] = nonlinearity_eval(p2, 3.0);
    CHECK(f == doctest::Approx(3.0));
    CHECK(F == doctest::Approx(4.5));

    Nonlinearity sat = parse_nonlinearity("saturable");
    auto [fs, Fs] = nonlinearity_eval(sat, 1.0);
    CHECK(fs == doctest::Approx(0.5));
    CHECK(Fs == doctest::Approx(0.5 * (1.0 - std::log(2.0))));

    for (const char* kind :
         {"power(2.5)", "combined(2.5,1.8,-)", "saturable", "sqrt_type", "log_power(2.5)"}) {
        Nonlinearity nl = parse_nonlinearity(kind);
        auto [f0, F0] = nonlinearity_eval(nl, 0.0);
        CHECK(f0 == doctest::Approx(0.0));
        CHECK(F0 == doctest::Approx(0.0));
    }
}

TEST_CASE("nonlinearity: F' = f by finite differences") {
    const double ts[] = {0.1, 0.5, 1.0, 2.0, 5.0};
    for (const char* kind :
         {"power(2.5)", "power(1.7)", "combined(2.5,1.8,-)", "saturable", "sqrt_type",
          "log_power(2.2)"}) {
        Nonlinearity nl = parse_nonlinearity(kind);
        for (double t : ts) {
            double h = 1e-6 * std::max(1.0, std::abs(t));
            double dF = (nl.F(t + h) - nl.F(t - h)) / (2 * h);
            CHECK(dF == doctest::Approx(nl.f(t)).epsilon(1e-5));
        }
    }
}

TEST_CASE("symmetrize_radial: radial Gaussian is a fixed point") {
    GridSpec g{2, 32, 10.0};
    Field u = sample(g, [](double x, double y, double) { return std::exp(-(x * x + y * y)); });
    Field v = symmetrize_radial(u);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(v[i] == doctest::Approx(u[i]).epsilon(1e-12));
}

TEST_CASE("symmetrize_radial: odd function averages to zero") {
    // odd in x and zero on the unmirrored boundary row x = -L/2, so every
    // lattice shell cancels pairwise
    GridSpec g{2, 32, 10.0};
    Field u = sample(g, [](double x, double, double) {
        return std::sin(2.0 * M_PI * x / 10.0);
    });
    Field v = symmetrize_radial(u);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v[i]) < 1e-12);
}

TEST_CASE("symmetrize_radial: idempotent and axis-permutation invariant") {
    GridSpec g{2, 32, 10.0};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    Field u(g);
    for (auto& x : u.v) x = U(rng);
    Field once = symmetrize_radial(u);
    Field twice = symmetrize_radial(once);
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(twice[i] == doctest::Approx(once[i]).epsilon(1e-12));
    // transpose the two axes and compare: shells are permutation invariant
    Field ut(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            ut[static_cast<std::size_t>(j) * g.n + i] = u[static_cast<std::size_t>(i) * g.n + j];
    Field st = symmetrize_radial(ut);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            CHECK(st[static_cast<std::size_t>(j) * g.n + i] ==
                  doctest::Approx(once[static_cast<std::size_t>(i) * g.n + j]).epsilon(1e-12));
}

TEST_CASE("radial_profile: constant field") {
    GridSpec g{2, 32, 10.0};
    Field u(g);
    for (auto& x : u.v) x = 3.25;
    Profile p = radial_profile(u);
    CHECK(p.radii.size() >= 8);
    for (std::size_t k = 0; k < p.radii.size(); ++k) {
        CHECK(p.values[k] == doctest::Approx(3.25).epsilon(1e-12));
        if (k) CHECK(p.radii[k] > p.radii[k - 1]);
    }
}

TEST_CASE("radial_profile: Gaussian matches e^{-r^2} in the core") {
    GridSpec g{2, 256, 8.0};
    Field u = sample(g, [](double x, double y, double) { return std::exp(-(x * x + y * y)); });
    Profile p = radial_profile(u);
    for (std::size_t k = 0; k < p.radii.size(); ++k) {
        if (p.radii[k] >= g.L / 4) break;
        CHECK(std::abs(p.values[k] - std::exp(-p.radii[k] * p.radii[k])) < 5e-3);
    }
}

TEST_CASE("radial_profile: h_beta samples") {
    GridSpec g{3, 32, 16.0};
    Field u = sample(g, [](double x, double y, double z) {
        return std::pow(1.0 + x * x + y * y + z * z, -1.5);
    });
    Profile p = radial_profile(u);
    for (std::size_t k = 0; k < p.radii.size() && p.radii[k] < g.L / 4; ++k) {
        double expect = std::pow(1.0 + p.radii[k] * p.radii[k], -1.5);
        CHECK(p.values[k] == doctest::Approx(expect).epsilon(0.05));
    }
}

TEST_CASE("radial_profile commutes with symmetrize_radial") {
    GridSpec g{2, 32, 10.0};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1, 1);
    Field u(g);
    for (auto& x : u.v) x = U(rng);
    Profile a = radial_profile(u);
    Profile b = radial_profile(symmetrize_radial(u));
    REQUIRE(a.radii.size() == b.radii.size());
    for (std::size_t k = 0; k < a.radii.size(); ++k)
        CHECK(a.values[k] == doctest::Approx(b.values[k]).epsilon(1e-12));
}

TEST_CASE("save_field / load_field round trip") {
    GridSpec g{2, 16, 5.0};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-2, 2);
    Field u(g);
    for (auto& x : u.v) x = U(rng);
    save_field(u, "test_core_field.bin");
    Field v = load_field("test_core_field.bin");
    CHECK(v.grid == g);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(v[i] == u[i]);
    std::remove("test_core_field.bin");
}
