#include "nonloc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

#include "nonloc/specfun.hpp"

namespace nonloc {

namespace {

struct OlsFit {
    double slope, intercept, slope_stderr;
};

OlsFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    double b = sxy / sxx, a = my - b * mx;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - (a + b * x[i]);
        sse += e * e;
    }
    double se = n > 2 ? std::sqrt(sse / ((n - 2) * sxx)) : 0.0;
    return {b, a, se};
}

int thread_budget() {
    if (const char* env = std::getenv("NONLOC_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return t;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

double ball_volume(int N) {
    return N == 2 ? M_PI : 4.0 * M_PI / 3.0;
}

/** Angular average of |x-y|^{-beta} over the relative direction, for |x| = r1
 * and |y| = r2, with the |r1-r2| power factored out: the return value is the
 * average times |r1-r2|^{gam}. Folding the importance-sampling weight D^{gam}
 * in here lets the D -> 0 radial singularity cancel exactly instead of
 * producing inf * 0. */
double angular_mean(int N, double beta, double r1, double r2, double D,
                    double gam) {
    const double S = r1 + r2;
    if (N == 3) {
        // (1/2) int_{-1}^{1} (r1^2 + r2^2 - 2 r1 r2 t)^{-beta/2} dt
        double q = 2.0 - beta;
        if (std::abs(q) < 1e-9) {  // beta = 2: logarithmic case
            double Dc = std::max(D, 1e-300);
            return std::log(S / Dc) / (2.0 * r1 * r2);  // gam == 0 here
        }
        double e = q + gam;
        if (std::abs(e) < 1e-12) e = 0.0;  // exact cancellation for alpha < 1
        double den = 4.0 * r1 * r2 * (0.5 * beta - 1.0);
        return (std::pow(D, e) - std::pow(S, q) * std::pow(D, gam)) / den;
    }
    // N = 2: (1/2pi) int_0^{2pi} (D^2 + 2 r1 r2 (1 - cos th))^{-beta/2} dth
    //      = D^{-beta} 2F1(beta/2, 1/2; 1; -4 r1 r2 / D^2)
    if (beta == 1.0) {  // alpha = 1: complete elliptic integral
        double Dc = std::max(D, 1e-12);
        double m = Dc * Dc + 4.0 * r1 * r2;
        double k = std::min(std::sqrt(4.0 * r1 * r2 / m), 0.9999999999999999);
        return (2.0 / M_PI) * std::comp_ellint_1(k) / std::sqrt(m);  // gam == 0
    }
    if (D * D > 0.5 * r1 * r2) {  // moderate argument: use the series directly
        double z = -4.0 * r1 * r2 / (D * D);
        return hyp2f1(0.5 * beta, 0.5, 1.0, z) * std::pow(D, gam - beta);
    }
    // |z| large: connection formula at infinity, D powers kept explicit
    double iz = D > 0 ? -D * D / (4.0 * r1 * r2) : 0.0;
    double c1 = gamma_fn(0.5 * (1.0 - beta)) /
                (gamma_fn(0.5) * gamma_fn(1.0 - 0.5 * beta)) *
                std::pow(4.0 * r1 * r2, -0.5 * beta) *
                hyp2f1(0.5 * beta, 0.5 * beta, 0.5 * (1.0 + beta), iz);
    double c2 = gamma_fn(0.5 * (beta - 1.0)) /
                (gamma_fn(0.5 * beta) * gamma_fn(0.5)) /
                (2.0 * std::sqrt(r1 * r2)) *
                hyp2f1(0.5, 0.5, 0.5 * (3.0 - beta), iz);
    double e = 1.0 - beta + gam;
    if (std::abs(e) < 1e-12) e = 0.0;  // exact cancellation for alpha < 1
    return c1 * std::pow(D, gam) + c2 * std::pow(D, e);
}

std::pair<double, double> annuli_mc(double R1, double h1, double R2, double h2,
                                    int N, double alpha, long samples,
                                    std::uint64_t seed) {
    if (N != 2 && N != 3) throw analysis_error("annuli: N must be 2 or 3");
    if (!(alpha > 0 && alpha < N)) throw analysis_error("annuli: alpha must lie in (0,N)");
    if (!(h1 > 0 && h1 < R1 / 2 && h2 > 0 && h2 < R2 / 2))
        throw analysis_error("annuli: need 0 < h < R/2");
    if (samples < 100) throw analysis_error("annuli: too few samples");

    const double C = riesz_constant(N, alpha);
    const double beta = N - alpha;
    const double A1 = ball_volume(N) * (std::pow(R1 + h1, N) - std::pow(R1 - h1, N));
    const double A2 = ball_volume(N) * (std::pow(R2 + h2, N) - std::pow(R2 - h2, N));
    const double lo1 = std::pow(R1 - h1, N), hi1 = std::pow(R1 + h1, N);
    const double a2 = R2 - h2, b2 = R2 + h2;
    // p(r2) = pr2 * r2^{N-1}: radial density of a uniform point on annulus 2
    const double pr2 = N / (std::pow(b2, N) - std::pow(a2, N));
    // Importance-sampling exponent for the second radius: the exact angular
    // average behaves like |r1-r2|^{alpha-1} near the diagonal, so for
    // alpha < 1 the plain estimator has unbounded second moment; drawing r2
    // from |r2-r1|^{-gam} restores bounded variance.
    const double gam = std::max(0.0, 1.0 - alpha);
    const double ge = 1.0 - gam;  // in (0, 1]

    // fixed chunking so the result is independent of the thread count
    const int chunks = 16;
    std::vector<double> sum(chunks, 0.0), sum2(chunks, 0.0);
    auto run_chunk = [&](int c) {
        long lo = samples * static_cast<long>(c) / chunks;
        long hi = samples * static_cast<long>(c + 1) / chunks;
        std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(c) + 1);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double s = 0, s2 = 0;
        for (long i = lo; i < hi; ++i) {
            // stratify the first radial coordinate over the full sample index
            double ux = (static_cast<double>(i) + uni(rng)) / samples;
            double r1 = std::pow(lo1 + ux * (hi1 - lo1), 1.0 / N);
            // r2 from the |r2 - r1|^{-gam} density via its inverse CDF
            auto H = [&](double x) {
                double d = x - r1;
                return std::copysign(std::pow(std::abs(d), ge), d) / ge;
            };
            double Ha = H(a2), Z = H(b2) - Ha;
            double w = Ha + uni(rng) * Z;
            double d = std::copysign(std::pow(ge * std::abs(w), 1.0 / ge), w);
            double r2 = std::clamp(r1 + d, a2, b2);
            double D = std::abs(d);
            // f = C * E_angle[|x-y|^{-beta}] * p(r2)/g(r2), 1/g = Z * D^{gam}
            double f = C * pr2 * std::pow(r2, N - 1) * Z *
                       angular_mean(N, beta, r1, r2, D, gam);
            s += f;
            s2 += f * f;
        }
        sum[c] = s;
        sum2[c] = s2;
    };
    int nthreads = std::min(thread_budget(), chunks);
    if (nthreads <= 1) {
        for (int c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t] {
                for (int c = t; c < chunks; c += nthreads) run_chunk(c);
            });
        for (auto& th : pool) th.join();
    }
    double S = 0, S2 = 0;
    for (int c = 0; c < chunks; ++c) { S += sum[c]; S2 += sum2[c]; }
    double mean = S / samples;
    double var = std::max(0.0, S2 / samples - mean * mean);
    double scale = A1 * A2;
    return {mean * scale, std::sqrt(var / samples) * scale};
}

}  // namespace

DecayFit decay_fit(const Profile& p, double r_lo, double r_hi) {
    if (!(r_lo > 0 && r_lo < r_hi))
        throw analysis_error("decay_fit: need 0 < r_lo < r_hi");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
        double r = p.radii[i];
        if (r < r_lo || r > r_hi) continue;
        if (!(p.values[i] > 0))
            throw analysis_error("decay_fit: nonpositive profile value inside the window");
        lx.push_back(std::log(r));
        ly.push_back(std::log(p.values[i]));
    }
    if (lx.size() < 10)
        throw analysis_error("decay_fit: fewer than 10 shells in the window");
    OlsFit f = ols(lx, ly);
    DecayFit out;
    out.exponent = -f.slope;
    out.constant = std::exp(f.intercept);
    out.stderr_ = f.slope_stderr;
    out.r_lo = r_lo;
    out.r_hi = r_hi;
    out.shells = static_cast<int>(lx.size());
    return out;
}

double expected_decay(int N, double s, double alpha, double r) {
    ExponentTable ex = critical_exponents(N, s, alpha);
    if (!(r >= ex.lower && r < ex.sobolev))
        throw analysis_error("expected_decay: r outside [lower critical, Sobolev)");
    if (r < 2.0)
        return std::min((N - alpha) / (2.0 - r), N + 2.0 * s);
    return N + 2.0 * s;
}

double sharp_constant(const SolveReport& rep, double r) {
    const ProblemSpec& sp = rep.problem;
    ExponentTable ex = critical_exponents(sp.N, sp.s, sp.alpha);
    if (!(r >= ex.lower && r < ex.sublinear_threshold))
        throw analysis_error("sharp_constant: r outside the sublinear sharp range");
    if (!(rep.mu > 0)) throw analysis_error("sharp_constant: needs mu > 0");
    double nr = 0;
    for (std::size_t i = 0; i < rep.field.size(); ++i)
        nr += std::pow(std::abs(rep.field[i]), r);
    nr *= std::pow(rep.field.grid.dx(), rep.field.grid.N);
    double C = riesz_constant(sp.N, sp.alpha);
    return std::pow(C * nr / rep.mu, 1.0 / (2.0 - r));
}

std::pair<double, double> annuli_interaction(double R, double h, int N, double alpha,
                                             long samples, std::uint64_t seed) {
    return annuli_mc(R, h, R, h, N, alpha, samples, seed);
}

std::pair<double, double> annuli_cross(double R1, double h1, double R2, double h2,
                                       int N, double alpha, long samples,
                                       std::uint64_t seed) {
    return annuli_mc(R1, h1, R2, h2, N, alpha, samples, seed);
}

double annuli_thickness(double R, int N, double alpha) {
    if (!(R >= 2)) throw analysis_error("annuli_thickness: R must be >= 2");
    if (alpha > 1.0) return std::pow(R, -(N - 2.0 + alpha) / 2.0);
    if (alpha == 1.0) return std::pow(R, -(N - 1.0) / 2.0) / std::sqrt(std::log(R));
    return std::pow(R, -(N - 1.0) / (1.0 + alpha));
}

std::pair<double, double> scaling_fit(const std::vector<double>& hs,
                                      const std::vector<double>& values) {
    if (hs.size() != values.size() || hs.size() < 4)
        throw analysis_error("scaling_fit: need >= 4 matched points");
    std::vector<double> lx(hs.size()), ly(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!(hs[i] > 0 && values[i] > 0))
            throw analysis_error("scaling_fit: nonpositive data");
        lx[i] = std::log(hs[i]);
        ly[i] = std::log(values[i]);
    }
    OlsFit f = ols(lx, ly);
    return {f.slope, f.slope_stderr};
}

DualityReport duality_scan(const ProblemSpec& spec,
                           const std::vector<double>& mu_grid,
                           const std::vector<double>& m_grid) {
    if (mu_grid.size() < 6 || m_grid.size() < 6)
        throw analysis_error("duality_scan: grids need at least 6 points");
    ExponentTable ex = critical_exponents(spec.N, spec.s, spec.alpha);
    if (spec.mode == Mode::choquard && !(spec.nonlinearity.growth() < ex.l2crit))
        throw analysis_error("duality_scan: nonlinearity is not L2-subcritical");
    const double nan = std::numeric_limits<double>::quiet_NaN();

    DualityReport rep;
    rep.mu_grid = mu_grid;
    rep.m_grid = m_grid;
    for (double mu : mu_grid) {
        ProblemSpec sp = spec;
        sp.mu = mu;
        sp.mass_target = 0;
        try {
            SolveReport r = fiber_descent_solve(sp);
            rep.p_curve.push_back(r.breakdown.L);
            rep.p_ok.push_back(r.converged);
        } catch (const std::runtime_error&) {
            rep.p_curve.push_back(nan);
            rep.p_ok.push_back(false);
        }
    }
    for (double m : m_grid) {
        ProblemSpec sp = spec;
        sp.mu = -1.0;  // free
        sp.mass_target = m;
        try {
            SolveReport r = normalized_flow_solve(sp, m);
            rep.kappa_curve.push_back(r.breakdown.L);
            rep.mu_of_m.push_back(r.mu);
            rep.kappa_ok.push_back(r.converged);
        } catch (const std::runtime_error&) {
            rep.kappa_curve.push_back(nan);
            rep.mu_of_m.push_back(nan);
            rep.kappa_ok.push_back(false);
        }
    }
    double m0 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mu_grid.size(); ++i)
        if (rep.p_ok[i] && mu_grid[i] > 0)
            m0 = std::min(m0, 2.0 * rep.p_curve[i] / mu_grid[i]);
    rep.m0_estimate = m0;
    for (std::size_t j = 0; j < m_grid.size(); ++j) {
        if (!rep.kappa_ok[j] || !(std::abs(rep.kappa_curve[j]) > 0)) {
            rep.duality_residuals.push_back(nan);
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < mu_grid.size(); ++i)
            if (rep.p_ok[i])
                best = std::min(best, rep.p_curve[i] - mu_grid[i] * m_grid[j] / 2.0);
        rep.duality_residuals.push_back(
            std::abs(rep.kappa_curve[j] - best) / std::abs(rep.kappa_curve[j]));
    }
    return rep;
}

}  // namespace nonloc
