#include "nonloc/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "nonloc/fft.hpp"
#include "nonloc/specfun.hpp"

namespace nonloc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/** Squared radius at every grid point. */
std::vector<double> radius2(const GridSpec& g) {
    std::vector<double> r2(g.size());
    std::vector<int> idx(g.N, 0);
    const double dx = g.dx();
    for (std::size_t lin = 0; lin < r2.size(); ++lin) {
        double acc = 0;
        for (int d = 0; d < g.N; ++d) {
            double c = (idx[d] - g.n / 2) * dx;
            acc += c * c;
        }
        r2[lin] = acc;
        for (int d = g.N - 1; d >= 0; --d) {
            if (++idx[d] < g.n) break;
            idx[d] = 0;
        }
    }
    return r2;
}

/** Precomputed spectral data for one grid and one s. */
struct SpectralCtx {
    GridSpec grid;
    std::vector<double> k2s;   // |xi|^{2s} per half-complex index
    std::vector<double> wgt;   // Hermitian multiplicities
    double cell;               // dx^N / size, for Parseval sums

    SpectralCtx(const GridSpec& g, double s) : grid(g) {
        std::vector<double> k2 = spectral_k2(g);
        k2s.resize(k2.size());
        for (std::size_t i = 0; i < k2.size(); ++i)
            k2s[i] = k2[i] == 0.0 ? 0.0 : std::pow(k2[i], s);
        const int n = g.n, last = n / 2 + 1;
        std::size_t rows = k2.size() / last;
        wgt.resize(k2.size());
        for (std::size_t r = 0; r < rows; ++r)
            for (int j = 0; j < last; ++j)
                wgt[r * last + j] = (j == 0 || j == n / 2) ? 1.0 : 2.0;
        cell = std::pow(g.dx(), g.N) / static_cast<double>(g.size());
    }
};

}  // namespace

Field initial_field(const ProblemSpec& spec) {
    const std::string& init = spec.solver.init;
    if (init.rfind("file:", 0) == 0) {
        Field u = load_field(init.substr(5));
        if (!(u.grid == spec.grid))
            throw solver_error("initial_field: file grid does not match spec grid");
        return u;
    }
    Field u(spec.grid);
    std::vector<double> r2 = radius2(spec.grid);
    if (init.rfind("gaussian", 0) == 0) {
        double w = 4.0;
        auto lp = init.find('(');
        if (lp != std::string::npos) w = std::stod(init.substr(lp + 1));
        if (!(w > 0)) throw solver_error("initial_field: gaussian width must be positive");
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::exp(-r2[i] / (w * w));
    } else if (init.rfind("hbeta", 0) == 0) {
        double beta = spec.N;
        auto lp = init.find('(');
        if (lp != std::string::npos) beta = std::stod(init.substr(lp + 1));
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] = std::pow(1.0 + r2[i], -beta / 2.0);
    } else {
        throw solver_error("initial_field: unknown init '" + init + "'");
    }
    return u;
}

SolveReport petviashvili_solve(const ProblemSpec& spec) {
    auto t0 = Clock::now();
    if (spec.mode != Mode::choquard || spec.nonlinearity.kind != NonlinKind::power)
        throw solver_error("petviashvili_solve: requires choquard mode with a pure power");
    if (spec.mu_free())
        throw solver_error("petviashvili_solve: mu must be fixed");
    const double r = spec.nonlinearity.r;
    ExponentTable ex = critical_exponents(spec.N, spec.s, spec.alpha);
    if (!(r > ex.lower && r < ex.upper))
        throw solver_error("petviashvili_solve: exponent outside (" +
                           std::to_string(ex.lower) + ", " + std::to_string(ex.upper) +
                           "): no variational solution");
    const double mu = spec.mu;
    const double theta = (2 * r - 1) / (2 * r - 2);
    SpectralCtx sc(spec.grid, spec.s);
    auto kernel = riesz_kernel(spec.grid, spec.alpha);

    SolveReport rep;
    rep.problem = spec;
    Field u = initial_field(spec);
    std::vector<std::complex<double>> uh, rhsh;
    Field W(spec.grid), rhs(spec.grid);
    int it = 0;
    double res = 0, last_gamma = 1.0;
    for (it = 1; it <= spec.solver.max_iters; ++it) {
        for (std::size_t i = 0; i < u.size(); ++i)
            W[i] = std::pow(std::abs(u[i]), r);
        Field conv = riesz_convolve(W, *kernel);
        for (std::size_t i = 0; i < u.size(); ++i) {
            double a = std::abs(u[i]);
            rhs[i] = a == 0.0 ? 0.0 : conv[i] * std::pow(a, r - 2.0) * u[i];
        }
        fft_forward(spec.grid, u.v, uh);
        fft_forward(spec.grid, rhs.v, rhsh);
        double num = 0, den = 0, rnum = 0, rden = 0;
        for (std::size_t i = 0; i < uh.size(); ++i) {
            double A = mu + sc.k2s[i];
            num += sc.wgt[i] * A * std::norm(uh[i]);
            den += sc.wgt[i] * (rhsh[i] * std::conj(uh[i])).real();
            rnum += sc.wgt[i] * std::norm(A * uh[i] - rhsh[i]);
            rden += sc.wgt[i] * std::norm(A * uh[i]);
        }
        res = std::sqrt(rnum / rden);
        rep.residual_history.push_back(res);
        if (res <= spec.solver.grad_tol) break;
        double gamma = num / den;
        double fac = std::pow(gamma, theta);
        for (std::size_t i = 0; i < uh.size(); ++i)
            rhsh[i] *= fac / (mu + sc.k2s[i]);
        fft_inverse(spec.grid, rhsh, u.v);
        if (inner(u, u) < 1e-12)
            throw solver_error("petviashvili_solve: collapse to zero");
        if (it % 25 == 0 && res > 1e-2) u = symmetrize_radial(u);
        last_gamma = gamma;
    }
    rep.field = std::move(u);
    rep.iterations = std::min(it, spec.solver.max_iters);
    rep.breakdown = energy_breakdown(rep.field, spec);
    rep.mu = mu;
    rep.mass = rep.breakdown.M;
    rep.converged = res <= spec.solver.grad_tol &&
                    std::abs(last_gamma - 1.0) <= spec.solver.petviashvili_gamma_tol &&
                    pohozaev_relative(rep.breakdown) <= spec.solver.poho_tol;
    rep.wallclock = seconds_since(t0);
    return rep;
}

namespace {

/** Action at fixed mu together with the pieces needed by the descent. */
double action_of(const Field& u, const ProblemSpec& spec) {
    EnergyBreakdown eb = energy_breakdown(u, spec);
    return eb.L;
}

}  // namespace

SolveReport fiber_descent_solve(const ProblemSpec& spec) {
    auto t0 = Clock::now();
    if (spec.mu_free())
        throw solver_error("fiber_descent_solve: mu must be fixed");
    const double mu = spec.mu;
    SpectralCtx sc(spec.grid, spec.s);

    SolveReport rep;
    rep.problem = spec;
    Field u = initial_field(spec);
    if (inner(u, u) < 1e-12) throw solver_error("fiber_descent_solve: degenerate init");
    bool projected_ever = false;
    std::vector<std::complex<double>> uh, gh;
    int it = 0, stalls = 0, since_best = 0;
    double res = 0, poho = 1, step0 = spec.solver.step;
    double best_res = 1e300;
    // Pohozaev projection: the fiber direction is the unstable (mountain-pass)
    // mode, so the iterate is re-projected after every accepted step.
    auto project_with = [&](const EnergyBreakdown& ebNow, double drift_tol) -> bool {
        FiberCurve fc = fiber_curve(ebNow, spec);
        if (!(fc.C > 0)) return false;
        try {
            double ts = std::clamp(fiber_maximizer(fc), 0.2, 5.0);
            // only rescale on real drift: interpolation noise would otherwise
            // put a floor under the residual
            if (std::abs(ts - 1.0) > drift_tol) u = rescale_field(u, ts);
            projected_ever = true;
            return true;
        } catch (const operator_error&) {
            return false;
        }
    };
    // Exact amplitude stabilizer: rescale u by the Nehari factor c solving
    // <grad L(cu), cu> = 0. Unlike the spatial fiber rescale this is free of
    // interpolation noise, and the discrete solution satisfies it exactly, so
    // the residual is not floored. Cheap closed forms for the homogeneous
    // Choquard power (where <src,u> = r D) and for local mode.
    const bool homog_ch =
        spec.mode == Mode::choquard && spec.nonlinearity.kind == NonlinKind::power;
    auto nehari_factor = [&](const Field& f, EnergyBreakdown& e) -> double {
        double quad = e.T + mu * e.M;
        if (!(quad > 0)) return 1.0;
        if (homog_ch) {
            double r2 = spec.nonlinearity.r;
            double su = r2 * e.D;
            if (!(su > 0)) return 1.0;
            return std::pow(quad / su, 1.0 / (2.0 * r2 - 2.0));
        }
        if (spec.mode == Mode::local) {
            const double cell = std::pow(f.grid.dx(), f.grid.N);
            auto phi = [&](double c) {
                double acc = 0;
                for (std::size_t i = 0; i < f.size(); ++i)
                    acc += spec.nonlinearity.f(c * f[i]) * f[i];
                return quad * c - acc * cell;
            };
            double clo = 1.0, chi = 1.0;
            if (phi(1.0) > 0) {
                while (phi(chi) > 0 && chi < 64) chi *= 2;
                if (phi(chi) > 0) return 1.0;
            } else {
                while (phi(clo) < 0 && clo > 1.0 / 64) clo *= 0.5;
                if (phi(clo) < 0) return 1.0;
            }
            for (int i = 0; i < 80; ++i) {
                double mid = 0.5 * (clo + chi);
                (phi(mid) > 0 ? clo : chi) = mid;
            }
            return 0.5 * (clo + chi);
        }
        return 1.0;  // non-homogeneous Choquard: fiber projection only
    };
    auto apply_amplitude = [&](Field& f, EnergyBreakdown& e, double c) {
        if (!(c > 0) || std::abs(c - 1.0) < 1e-15) return;
        for (auto& x : f.v) x *= c;
        if (homog_ch) {
            double r2 = spec.nonlinearity.r;
            e.T *= c * c;
            e.M *= c * c;
            e.D *= std::pow(c, 2.0 * r2);
            e.L = 0.5 * e.T + 0.5 * mu * e.M - 0.5 * e.D;
            double N = spec.N, s2 = spec.s;
            e.P = 0.5 * (N - 2 * s2) * e.T + 0.5 * N * mu * e.M -
                  0.5 * (N + spec.alpha) * e.D;
            e.P_scale = 0.5 * (N - 2 * s2) * e.T + 0.5 * N * std::abs(mu) * e.M +
                        0.5 * (N + spec.alpha) * e.D;
        } else {
            e = energy_breakdown(f, spec);
        }
    };
    auto renorm_u = [&]() {
        EnergyBreakdown e0 = energy_breakdown(u, spec);
        apply_amplitude(u, e0, nehari_factor(u, e0));
    };
    project_with(energy_breakdown(u, spec), 1e-9);
    renorm_u();
    for (it = 1; it <= spec.solver.max_iters; ++it) {
        // early-phase drift control along the fiber
        if (it % 10 == 0 && res > 1e-3) {
            project_with(energy_breakdown(u, spec), 0.02);
            renorm_u();
        }
        Field src = source_term(u, spec);
        EnergyBreakdown eb = energy_breakdown(u, spec);
        double Lcur = eb.L;
        // grad = ((-D)^s + mu) u - src;  residual relative to ||((-D)^s+mu)u||
        fft_forward(spec.grid, u.v, uh);
        fft_forward(spec.grid, src.v, gh);
        double rnum = 0, rden = 0, slope = 0;
        for (std::size_t i = 0; i < uh.size(); ++i) {
            double A = mu + sc.k2s[i];
            double g2 = std::norm(A * uh[i] - gh[i]);
            rnum += sc.wgt[i] * g2;
            rden += sc.wgt[i] * std::norm(A * uh[i]);
            slope += sc.wgt[i] * g2 / A;  // <grad L, precond grad>
            gh[i] = uh[i] - gh[i] / A;    // preconditioned gradient direction
        }
        slope *= sc.cell;
        res = std::sqrt(rnum / rden);
        rep.residual_history.push_back(res);
        poho = pohozaev_relative(eb);
        if (res <= spec.solver.grad_tol && poho <= spec.solver.poho_tol) break;
        if (res < 0.999 * best_res) {
            best_res = res;
            since_best = 0;
        } else if (++since_best >= 30) {
            break;  // stagnated at the discretization floor
        }

        Field dir(spec.grid);
        fft_inverse(spec.grid, gh, dir.v);
        double st = step0;
        bool accepted = false;
        for (int bt = 0; bt < 25; ++bt) {
            Field trial = u;
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= st * dir[i];
            // trust region on the mass: the fiber direction is explosive
            if (inner(trial, trial) > 4.0 * eb.M) {
                st *= 0.5;
                continue;
            }
            EnergyBreakdown ebt = energy_breakdown(trial, spec);
            apply_amplitude(trial, ebt, nehari_factor(trial, ebt));
            if (ebt.L <= Lcur - 1e-6 * st * slope) {
                u = std::move(trial);
                accepted = true;
                break;
            }
            st *= 0.5;
        }
        if (accepted) {
            stalls = 0;
            step0 = std::min(st * 2.0, 1.0);
        } else {
            step0 = spec.solver.step;
            if (!project_with(eb, 0.02) && !projected_ever)
                throw solver_error(
                    "fiber_descent_solve: no Pohozaev projection (interaction term nonpositive)");
            if (++stalls >= 3) break;  // step underflow: quadrature floor reached
        }
        if (it % 25 == 0 && res > 1e-2) u = symmetrize_radial(u);
    }
    rep.field = std::move(u);
    rep.iterations = std::min(it, spec.solver.max_iters);
    rep.breakdown = energy_breakdown(rep.field, spec);
    rep.mu = mu;
    rep.mass = rep.breakdown.M;
    rep.converged = res <= spec.solver.grad_tol &&
                    pohozaev_relative(rep.breakdown) <= spec.solver.poho_tol;
    rep.wallclock = seconds_since(t0);
    return rep;
}

SolveReport normalized_flow_solve(const ProblemSpec& spec, double m) {
    auto t0 = Clock::now();
    if (!(m > 0)) throw solver_error("normalized_flow_solve: mass must be positive");
    ExponentTable ex = critical_exponents(spec.N, spec.s, spec.alpha > 0 && spec.mode == Mode::choquard
                                                             ? spec.alpha
                                                             : std::min(spec.N - 0.5, 1.0));
    if (spec.mode == Mode::choquard && !(spec.nonlinearity.growth() < ex.l2crit))
        throw solver_error("normalized_flow_solve: nonlinearity is not L2-subcritical");
    SpectralCtx sc(spec.grid, spec.s);

    auto project = [&](Field& f) {
        double M = inner(f, f);
        double c = std::sqrt(m / M);
        for (auto& x : f.v) x *= c;
    };
    auto mu_free_action = [&](const Field& f) {
        ProblemSpec sp0 = spec;
        sp0.mu = 0.0;
        EnergyBreakdown eb = energy_breakdown(f, sp0);
        return spec.mode == Mode::choquard ? 0.5 * eb.T - 0.5 * eb.D
                                           : 0.5 * eb.T - eb.Gloc;
    };

    SolveReport rep;
    rep.problem = spec;
    Field u = initial_field(spec);
    project(u);
    double T0 = seminorm_gagliardo(u, spec.s).T;
    double Lcur = mu_free_action(u);
    std::vector<std::complex<double>> uh, gh;
    int it = 0, stalls = 0, since_best = 0;
    double res = 0, step0 = spec.solver.step, best_res = 1e300;
    for (it = 1; it <= spec.solver.max_iters; ++it) {
        Field src = source_term(u, spec);
        double T = seminorm_gagliardo(u, spec.s).T;
        if (T > 1e6 * std::max(T0, 1e-300))
            throw solver_error("normalized_flow_solve: runaway kinetic energy (supercritical misuse?)");
        double muh = (inner(src, u) - T) / m;
        // projected gradient: (-D)^s u - src + muh u
        fft_forward(spec.grid, u.v, uh);
        fft_forward(spec.grid, src.v, gh);
        double rnum = 0, rden = 0;
        for (std::size_t i = 0; i < uh.size(); ++i) {
            double A = 1.0 + sc.k2s[i];
            rnum += sc.wgt[i] * std::norm(sc.k2s[i] * uh[i] - gh[i] + muh * uh[i]);
            rden += sc.wgt[i] * std::norm(A * uh[i]);
            gh[i] = (sc.k2s[i] * uh[i] - gh[i] + muh * uh[i]) / A;  // preconditioned constrained gradient
        }
        res = std::sqrt(rnum / rden);
        rep.residual_history.push_back(res);
        if (res <= spec.solver.grad_tol) break;
        if (res < 0.999 * best_res) {
            best_res = res;
            since_best = 0;
        } else if (++since_best >= 30) {
            break;  // stagnated at the discretization floor
        }
        Field dir(spec.grid);
        fft_inverse(spec.grid, gh, dir.v);
        double st = step0;
        bool accepted = false;
        for (int bt = 0; bt < 30; ++bt) {
            Field trial = u;
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= st * dir[i];
            project(trial);
            double Lt = mu_free_action(trial);
            if (Lt <= Lcur + 1e-12 * std::abs(Lcur)) {
                u = std::move(trial);
                Lcur = Lt;
                accepted = true;
                break;
            }
            st *= 0.5;
        }
        if (accepted) {
            stalls = 0;
            step0 = std::min(st * 2.0, 1.0);
        } else {
            step0 = spec.solver.step;
            if (++stalls >= 3) break;  // step underflow: quadrature floor reached
        }
        // early-phase stabilizer only: the discrete constrained minimizer is
        // not shell-constant, so symmetrizing near convergence is a perturbation
        if (it % 25 == 0 && res > 1e-2) {
            u = symmetrize_radial(u);
            project(u);
            Lcur = mu_free_action(u);
        }
    }
    project(u);
    rep.field = std::move(u);
    rep.iterations = std::min(it, spec.solver.max_iters);
    rep.mu = lagrange_multiplier(rep.field, spec);
    rep.problem.mu = rep.mu;
    {
        ProblemSpec sp = spec;
        sp.mu = rep.mu;
        rep.breakdown = energy_breakdown(rep.field, sp);
        rep.breakdown.L = Lcur;  // the mu-free action the flow minimizes
    }
    rep.mass = inner(rep.field, rep.field);
    rep.converged = res <= spec.solver.grad_tol;
    rep.wallclock = seconds_since(t0);
    return rep;
}

SolveReport semiclassical_solve(const ProblemSpec& spec,
                                const std::function<double(const std::vector<double>&)>& V,
                                double eps) {
    auto t0 = Clock::now();
    if (spec.mode != Mode::local)
        throw solver_error("semiclassical_solve: local mode required");
    const GridSpec& g = spec.grid;
    Field Veps(g);
    std::vector<int> idx(g.N, 0);
    std::vector<double> pt(g.N);
    for (std::size_t lin = 0; lin < Veps.size(); ++lin) {
        for (int d = 0; d < g.N; ++d) pt[d] = (idx[d] - g.n / 2) * g.dx() * eps;
        Veps[lin] = V(pt);
        for (int d = g.N - 1; d >= 0; --d) {
            if (++idx[d] < g.n) break;
            idx[d] = 0;
        }
    }
    // ties prefer the box center, so a constant V keeps the state centered
    std::size_t argmin = 0;
    for (int d = 0; d < g.N; ++d) argmin = argmin * g.n + g.n / 2;
    double vmin = Veps[argmin];
    for (std::size_t lin = 0; lin < Veps.size(); ++lin)
        if (Veps[lin] < vmin) { vmin = Veps[lin]; argmin = lin; }
    if (!(vmin > 0))
        throw solver_error("semiclassical_solve: V must be positive");

    // continuation: autonomous ground state at mu = min V, centered at argmin V
    ProblemSpec auto_spec = spec;
    auto_spec.mu = vmin;
    SolveReport base = fiber_descent_solve(auto_spec);
    Field u = base.field;
    {
        // circular shift so the box center lands on argmin
        std::vector<int> shift(g.N);
        std::size_t rem = argmin;
        for (int d = g.N - 1; d >= 0; --d) {
            shift[d] = static_cast<int>(rem % g.n) - g.n / 2;
            rem /= g.n;
        }
        bool nonzero = false;
        for (int d = 0; d < g.N; ++d) nonzero |= shift[d] != 0;
        if (nonzero) {
            Field moved(g);
            std::fill(idx.begin(), idx.end(), 0);
            for (std::size_t lin = 0; lin < u.size(); ++lin) {
                std::size_t dst = 0;
                for (int d = 0; d < g.N; ++d) {
                    int j = idx[d] + shift[d];
                    j = ((j % g.n) + g.n) % g.n;
                    dst = dst * g.n + j;
                }
                moved[dst] = u[lin];
                for (int d = g.N - 1; d >= 0; --d) {
                    if (++idx[d] < g.n) break;
                    idx[d] = 0;
                }
            }
            u = std::move(moved);
        }
    }

    const bool v_radial = [&] {
        Field sym = symmetrize_radial(Veps);
        for (std::size_t i = 0; i < sym.size(); ++i)
            if (std::abs(sym[i] - Veps[i]) > 1e-12) return false;
        return true;
    }();

    SpectralCtx sc(g, spec.s);
    auto action = [&](const Field& f) {
        double T = seminorm_gagliardo(f, spec.s).T;
        double pot = 0, G = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            pot += Veps[i] * f[i] * f[i];
            G += spec.nonlinearity.F(f[i]);
        }
        double cell = std::pow(g.dx(), g.N);
        return 0.5 * T + 0.5 * pot * cell - G * cell;
    };
    auto nehari_rescale = [&](Field& f) {
        double q = seminorm_gagliardo(f, spec.s).T;
        double cell = std::pow(g.dx(), g.N);
        double pot = 0;
        for (std::size_t i = 0; i < f.size(); ++i) pot += Veps[i] * f[i] * f[i];
        double quad = q + pot * cell;
        auto phi = [&](double c) {
            double acc = 0;
            for (std::size_t i = 0; i < f.size(); ++i)
                acc += spec.nonlinearity.f(c * f[i]) * f[i];
            return quad * c - acc * cell;
        };
        // phi > 0 near the origin and < 0 past the Nehari crossing
        double clo = 1e-3, chi = 1.0;
        while (phi(clo) <= 0 && clo > 1e-9) clo *= 0.5;
        if (phi(clo) <= 0) return;  // no crossing below: leave f alone
        while (phi(chi) > 0 && chi < 1e6) chi *= 2;
        if (phi(chi) > 0) return;  // no crossing above: leave f alone
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (clo + chi);
            if (phi(mid) > 0) clo = mid; else chi = mid;
        }
        double c = 0.5 * (clo + chi);
        for (auto& x : f.v) x *= c;
    };

    SolveReport rep;
    rep.problem = spec;
    nehari_rescale(u);
    double Lcur = action(u);
    std::vector<std::complex<double>> uh, gh;
    int it = 0, stalls = 0, since_best = 0;
    double res = 0, step0 = spec.solver.step, best_res = 1e300;
    for (it = 1; it <= spec.solver.max_iters; ++it) {
        Field grad(g);
        for (std::size_t i = 0; i < u.size(); ++i)
            grad[i] = Veps[i] * u[i] - spec.nonlinearity.f(u[i]);
        fft_forward(g, u.v, uh);
        fft_forward(g, grad.v, gh);
        double rnum = 0, rden = 0;
        for (std::size_t i = 0; i < uh.size(); ++i) {
            double A = vmin + sc.k2s[i];
            rnum += sc.wgt[i] * std::norm(sc.k2s[i] * uh[i] + gh[i]);
            rden += sc.wgt[i] * std::norm(A * uh[i]);
            gh[i] = (sc.k2s[i] * uh[i] + gh[i]) / A;
        }
        res = std::sqrt(rnum / rden);
        rep.residual_history.push_back(res);
        if (res <= spec.solver.grad_tol) break;
        if (res < 0.999 * best_res) {
            best_res = res;
            since_best = 0;
        } else if (++since_best >= 30) {
            break;  // stagnated at the discretization floor
        }
        Field dir(g);
        fft_inverse(g, gh, dir.v);
        double st = step0;
        const double M0 = inner(u, u);
        bool accepted = false;
        for (int bt = 0; bt < 30; ++bt) {
            Field trial = u;
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= st * dir[i];
            if (inner(trial, trial) > 4.0 * M0) {
                st *= 0.5;
                continue;
            }
            // re-anchor on the Nehari manifold: the amplitude mode is unstable
            nehari_rescale(trial);
            double Lt = action(trial);
            if (Lt <= Lcur + 1e-12 * std::abs(Lcur)) {
                u = std::move(trial);
                Lcur = Lt;
                accepted = true;
                break;
            }
            st *= 0.5;
        }
        if (accepted) {
            stalls = 0;
            step0 = std::min(st * 2.0, 1.0);
        } else {
            step0 = spec.solver.step;
            if (++stalls >= 3) break;  // step underflow: quadrature floor reached
        }
        if (v_radial && it % 25 == 0 && res > 1e-2) {
            u = symmetrize_radial(u);
            Lcur = action(u);
        }
    }
    rep.field = std::move(u);
    rep.iterations = std::min(it, spec.solver.max_iters);
    {
        ProblemSpec sp = spec;
        sp.mu = vmin;
        rep.breakdown = energy_breakdown(rep.field, sp);
        rep.breakdown.L = Lcur;
    }
    rep.mu = vmin;
    rep.problem.mu = vmin;
    rep.mass = inner(rep.field, rep.field);
    rep.converged = res <= spec.solver.grad_tol;
    rep.wallclock = seconds_since(t0);
    return rep;
}

std::vector<double> argmax_location(const Field& u) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < u.size(); ++i)
        if (u[i] > u[best]) best = i;
    const GridSpec& g = u.grid;
    std::vector<double> loc(g.N);
    std::size_t rem = best;
    for (int d = g.N - 1; d >= 0; --d) {
        loc[d] = (static_cast<int>(rem % g.n) - g.n / 2) * g.dx();
        rem /= g.n;
    }
    return loc;
}

}  // namespace nonloc
