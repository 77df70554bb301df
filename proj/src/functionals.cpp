#include "nonloc/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace nonloc {

double choquard_coupling(const Nonlinearity& nl, double t) {
    if (nl.kind == NonlinKind::power)
        return std::pow(std::abs(t), nl.r) / std::sqrt(nl.r);
    return nl.F(t);
}

double choquard_coupling_deriv(const Nonlinearity& nl, double t) {
    if (nl.kind == NonlinKind::power) {
        double a = std::abs(t);
        return a == 0.0 ? 0.0 : std::sqrt(nl.r) * std::pow(a, nl.r - 2.0) * t;
    }
    return nl.f(t);
}

Field source_term(const Field& u, const ProblemSpec& spec) {
    Field out(u.grid);
    if (spec.mode == Mode::choquard) {
        Field W(u.grid);
        for (std::size_t i = 0; i < u.size(); ++i)
            W[i] = choquard_coupling(spec.nonlinearity, u[i]);
        Field conv = riesz_convolve(W, spec.alpha);
        for (std::size_t i = 0; i < u.size(); ++i)
            out[i] = conv[i] * choquard_coupling_deriv(spec.nonlinearity, u[i]);
    } else {
        for (std::size_t i = 0; i < u.size(); ++i)
            out[i] = spec.nonlinearity.f(u[i]);
    }
    return out;
}

EnergyBreakdown energy_breakdown(const Field& u, const ProblemSpec& spec) {
    EnergyBreakdown eb;
    eb.mu = spec.mu_free() ? 0.0 : spec.mu;
    eb.T = seminorm_gagliardo(u, spec.s).T;
    eb.M = inner(u, u);
    const double N = spec.N, s = spec.s;
    if (spec.mode == Mode::choquard) {
        Field W(u.grid);
        for (std::size_t i = 0; i < u.size(); ++i)
            W[i] = choquard_coupling(spec.nonlinearity, u[i]);
        eb.D = inner(riesz_convolve(W, spec.alpha), W);
        eb.L = 0.5 * eb.T + 0.5 * eb.mu * eb.M - 0.5 * eb.D;
        eb.P = 0.5 * (N - 2 * s) * eb.T + 0.5 * N * eb.mu * eb.M -
               0.5 * (N + spec.alpha) * eb.D;
        eb.P_scale = 0.5 * (N - 2 * s) * eb.T + 0.5 * N * std::abs(eb.mu) * eb.M +
                     0.5 * (N + spec.alpha) * eb.D;
    } else {
        double acc = 0;
        for (std::size_t i = 0; i < u.size(); ++i) acc += spec.nonlinearity.F(u[i]);
        eb.Gloc = acc * std::pow(u.grid.dx(), u.grid.N);
        eb.L = 0.5 * eb.T + 0.5 * eb.mu * eb.M - eb.Gloc;
        eb.P = 0.5 * (N - 2 * s) * eb.T + N * (0.5 * eb.mu * eb.M - eb.Gloc);
        eb.P_scale = 0.5 * (N - 2 * s) * eb.T +
                     N * (0.5 * std::abs(eb.mu) * eb.M + std::abs(eb.Gloc));
    }
    return eb;
}

FiberCurve fiber_curve(const EnergyBreakdown& eb, const ProblemSpec& spec) {
    FiberCurve fc;
    fc.A = 0.5 * eb.T;
    fc.B = 0.5 * eb.mu * eb.M;
    fc.ea = spec.N - 2 * spec.s;
    fc.eb = spec.N;
    if (spec.mode == Mode::choquard) {
        fc.C = 0.5 * eb.D;
        fc.ec = spec.N + spec.alpha;
    } else {
        fc.C = eb.Gloc;
        fc.ec = spec.N;
    }
    return fc;
}

double fiber_value(const FiberCurve& fc, double t) {
    return fc.A * std::pow(t, fc.ea) + fc.B * std::pow(t, fc.eb) -
           fc.C * std::pow(t, fc.ec);
}

double fiber_maximizer(const FiberCurve& fc) {
    if (!(fc.C > 0))
        throw operator_error("fiber_maximizer: no Pohozaev projection (C <= 0)");
    auto dg = [&fc](double t) {
        return fc.A * fc.ea * std::pow(t, fc.ea - 1.0) +
               fc.B * fc.eb * std::pow(t, fc.eb - 1.0) -
               fc.C * fc.ec * std::pow(t, fc.ec - 1.0);
    };
    // bracket the + -> - sign change of g' on a log grid
    const int scan = 600;
    double lo = 1e-6, hi = 1e6;
    double prev_t = lo, prev_v = dg(lo);
    double bra = 0, brb = 0;
    bool found = false;
    for (int i = 1; i <= scan; ++i) {
        double t = lo * std::pow(hi / lo, static_cast<double>(i) / scan);
        double v = dg(t);
        if (prev_v > 0 && v <= 0) {
            bra = prev_t;
            brb = t;
            found = true;
            break;
        }
        prev_t = t;
        prev_v = v;
    }
    if (!found)
        throw operator_error(
            "fiber_maximizer: bracket failure (A=" + std::to_string(fc.A) +
            ", B=" + std::to_string(fc.B) + ", C=" + std::to_string(fc.C) + ")");
    double coefmax = std::max({std::abs(fc.A * fc.ea), std::abs(fc.B * fc.eb),
                               std::abs(fc.C * fc.ec)});
    for (int it = 0; it < 300; ++it) {
        double mid = 0.5 * (bra + brb);
        double v = dg(mid);
        if (std::abs(v) < 1e-10 * coefmax) return mid;
        if (v > 0) bra = mid; else brb = mid;
    }
    return 0.5 * (bra + brb);
}

namespace {

double keys_cubic(double x) {
    const double a = -0.5;
    x = std::abs(x);
    if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return (((x - 5.0) * x + 8.0) * x - 4.0) * a;
    return 0.0;
}

}  // namespace

Field rescale_field(const Field& u, double t) {
    if (!(t >= 0.2 && t <= 5.0))
        throw operator_error("rescale_field: t outside the accuracy envelope [0.2, 5]");
    const GridSpec& g = u.grid;
    const int n = g.n, N = g.N;
    // per-output-index source stencils along one axis (shared by all axes)
    std::vector<std::array<int, 4>> src(n);
    std::vector<std::array<double, 4>> wgt(n);
    for (int i = 0; i < n; ++i) {
        double q = (i - n / 2) / t;  // query in index units relative to center
        double p = q + n / 2;
        int base = static_cast<int>(std::floor(p));
        for (int k = 0; k < 4; ++k) {
            int j = base - 1 + k;
            double w = keys_cubic(p - j);
            // zero beyond the half-box: out-of-range samples contribute 0
            if (j < 0 || j >= n || std::abs(q) > n / 2.0) {
                src[i][k] = 0;
                wgt[i][k] = 0.0;
            } else {
                src[i][k] = j;
                wgt[i][k] = w;
            }
        }
    }
    Field cur = u;
    std::vector<double> next(cur.size());
    // apply the 1D stencil along each axis in turn
    std::size_t stride_unit = 1;
    std::vector<std::size_t> strides(N);
    for (int d = N - 1; d >= 0; --d) {
        strides[d] = stride_unit;
        stride_unit *= n;
    }
    for (int d = 0; d < N; ++d) {
        std::size_t stride = strides[d];
        std::size_t outer = cur.size() / n;
        for (std::size_t o = 0; o < outer; ++o) {
            // decompose o into the index with axis d removed
            std::size_t rem = o, base_lin = 0;
            for (int dd = N - 1; dd >= 0; --dd) {
                if (dd == d) continue;
                std::size_t id = rem % n;
                rem /= n;
                base_lin += id * strides[dd];
            }
            for (int i = 0; i < n; ++i) {
                double acc = 0;
                for (int k = 0; k < 4; ++k)
                    acc += wgt[i][k] * cur[base_lin + src[i][k] * stride];
                next[base_lin + i * stride] = acc;
            }
        }
        cur.v.swap(next);
    }
    return cur;
}

double lagrange_multiplier(const Field& u, const ProblemSpec& spec) {
    double M = inner(u, u);
    if (!(M > 0)) throw operator_error("lagrange_multiplier: zero mass");
    double T = seminorm_gagliardo(u, spec.s).T;
    return (inner(source_term(u, spec), u) - T) / M;
}

double pohozaev_relative(const EnergyBreakdown& eb) {
    return eb.P_scale > 0 ? std::abs(eb.P) / eb.P_scale : 0.0;
}

}  // namespace nonloc
